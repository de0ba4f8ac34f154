//! Benchmark fixtures shared by the criterion targets.

use plap_core::strip::StripGeometry;
use plap_core::NonlinearitySpec;

/// `f(t) = t - t^3` on `[0, 2]`.
pub fn cubic() -> NonlinearitySpec {
    NonlinearitySpec::polynomial(&[0.0, 1.0, 0.0, -1.0], 2.0).expect("valid polynomial")
}

/// `f(t) = t (1 - t)` on `[0, 2]`.
pub fn logistic() -> NonlinearitySpec {
    NonlinearitySpec::polynomial(&[0.0, 1.0, -1.0], 2.0).expect("valid polynomial")
}

/// `f(t) = t - 1` on `[0, 4]`; its catalog has a periodic entry.
pub fn shifted_linear() -> NonlinearitySpec {
    NonlinearitySpec::polynomial(&[-1.0, 1.0], 4.0).expect("valid polynomial")
}

/// Three continuous pieces with two positive zeros.
pub fn piecewise() -> NonlinearitySpec {
    NonlinearitySpec::new(
        vec![0.0, 0.5, 1.5, 3.0],
        vec![
            vec![-0.2, 1.0, 0.5],
            vec![0.425, 1.5, -2.0, 0.3],
            vec![0.225, -1.0, 0.4],
        ],
    )
    .expect("valid piecewise polynomial")
}

pub fn small_strip() -> StripGeometry {
    StripGeometry {
        width: 4.0,
        height: 3.0,
        nx: 33,
        ny: 33,
    }
}
