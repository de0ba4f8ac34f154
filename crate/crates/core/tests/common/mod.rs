//! Independent reference computations shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Evaluates `sum c_k t^k` directly (no Horner) so that it shares no code
/// with the library.
pub fn eval_poly(c: &[f64], t: f64) -> f64 {
    c.iter()
        .enumerate()
        .map(|(k, a)| a * t.powi(k as i32))
        .sum()
}

pub fn eval_primitive(c: &[f64], t: f64) -> f64 {
    c.iter()
        .enumerate()
        .map(|(k, a)| a * t.powi(k as i32 + 1) / (k + 1) as f64)
        .sum()
}

fn ball_volume(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * PI / n as f64 * ball_volume(n - 2),
    }
}

/// Outcome of shooting from `u(0) = a` for the radial equation
/// `-(s^{N-1} |u'|^{p-2} u')' = s^{N-1} f(u)`.
pub struct Shot {
    /// First radius where `u` reaches `0`, if it does before `s_max`.
    pub zero: Option<f64>,
    /// Radial energy accumulated up to `zero` (or `s_max`).
    pub energy: f64,
}

/// Shoots with classical RK4 on `(u, w = s^{N-1} |u'|^{p-2} u')` and a fixed
/// step, starting from the series `u ~ a - c s^{p/(p-1)}` near the origin.
pub fn shoot(c: &[f64], rho: f64, p: f64, n: u32, a: f64, s_max: f64, h: f64) -> Shot {
    let f = |u: f64| {
        if u > rho {
            0.0
        } else if u < 0.0 {
            eval_poly(c, 0.0)
        } else {
            eval_poly(c, u)
        }
    };
    let big_f_rho = |u: f64| {
        let u = u.clamp(0.0, rho);
        eval_primitive(c, rho) - eval_primitive(c, u)
    };
    let dim = (n - 1) as i32;
    let inv = |w: f64, s: f64| {
        let x = w / s.powi(dim);
        x.signum() * x.abs().powf(1.0 / (p - 1.0))
    };
    let rhs = |s: f64, y: [f64; 2]| [inv(y[1], s), -s.powi(dim) * f(y[0])];
    let s0 = 1e-3 * h;
    let fa = f(a);
    let q = p / (p - 1.0);
    let mut y = [
        a - (p - 1.0) / p * (fa / n as f64).abs().powf(1.0 / (p - 1.0)) * s0.powf(q) * fa.signum(),
        -fa * s0.powi(n as i32) / n as f64,
    ];
    let area = n as f64 * ball_volume(n);
    let density = |s: f64, y: [f64; 2]| {
        let du = inv(y[1], s);
        (du.abs().powf(p) / p + big_f_rho(y[0])) * s.powi(dim)
    };
    let mut s = s0;
    let mut energy = 0.0;
    let mut e_prev = density(s, y);
    while s < s_max {
        let hh = h.min(s_max - s);
        let k1 = rhs(s, y);
        let k2 = rhs(
            s + 0.5 * hh,
            [y[0] + 0.5 * hh * k1[0], y[1] + 0.5 * hh * k1[1]],
        );
        let k3 = rhs(
            s + 0.5 * hh,
            [y[0] + 0.5 * hh * k2[0], y[1] + 0.5 * hh * k2[1]],
        );
        let k4 = rhs(s + hh, [y[0] + hh * k3[0], y[1] + hh * k3[1]]);
        let next = [
            y[0] + hh / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + hh / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        if next[0] <= 0.0 {
            let frac = y[0] / (y[0] - next[0]);
            let z = s + frac * hh;
            energy += 0.5 * (e_prev + density(z, [0.0, next[1]])) * (z - s);
            return Shot {
                zero: Some(z),
                energy: area * energy,
            };
        }
        let e_next = density(s + hh, next);
        energy += 0.5 * (e_prev + e_next) * hh;
        e_prev = e_next;
        y = next;
        s += hh;
    }
    Shot {
        zero: None,
        energy: area * energy,
    }
}

/// Sup norm of the energy minimizer on `B_r` for the truncated problem,
/// found by shooting: the largest `a < rho` whose first zero is at `r`,
/// unless the zero function has lower energy.
pub fn ball_sup_norm(c: &[f64], rho: f64, p: f64, n: u32, r: f64) -> f64 {
    let h = 2e-3;
    let reaches = |a: f64| shoot(c, rho, p, n, a, r, h).zero.is_some();
    // Dead core: even a = rho^- reaches zero inside the ball.
    let top = rho * (1.0 - 1e-14);
    if reaches(top) {
        return rho_or_zero(c, rho, p, n, r, top);
    }
    // Walk down from the top until the first zero falls inside the ball.
    let mut hi = top;
    let mut lo = None;
    let mut a = top;
    while lo.is_none() {
        a = rho - 2.0 * (rho - a);
        if a <= 0.0 {
            return 0.0;
        }
        if reaches(a) {
            lo = Some(a);
        } else {
            hi = a;
        }
    }
    let mut lo = lo.unwrap();
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if reaches(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    rho_or_zero(c, rho, p, n, r, lo)
}

fn rho_or_zero(c: &[f64], rho: f64, p: f64, n: u32, r: f64, a: f64) -> f64 {
    let shot = shoot(c, rho, p, n, a, r, 2e-3);
    let zero_energy =
        ball_volume(n) * r.powi(n as i32) * (eval_primitive(c, rho) - eval_primitive(c, 0.0));
    // A solution that vanishes before r is completed by u = 0 outside.
    let tail = match shot.zero {
        Some(z) => ball_volume(n) * (r.powi(n as i32) - z.powi(n as i32)) * eval_primitive(c, rho),
        None => 0.0,
    };
    if shot.energy + tail < zero_energy {
        if a >= rho * (1.0 - 1e-13) {
            rho
        } else {
            a
        }
    } else {
        0.0
    }
}

pub const BALL_RADII: [f64; 8] = [5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0];

/// Shooting-oracle sup norms for f = t (1 - t), N = 2, rho = 1 on
/// [`BALL_RADII`], frozen from [`ball_sup_norm`].
pub const BALL_ORACLE: [(f64, [f64; 8]); 3] = [
    (
        1.5,
        [
            0.0,
            0.9474549845168372,
            0.9829360861740755,
            0.9923826042765235,
            0.9959520648998312,
            0.9975953521360621,
            0.9984561198453926,
            0.9989502271646605,
        ],
    ),
    (
        2.0,
        [
            0.9284033966277706,
            0.9993922428103329,
            0.9999950888184376,
            0.9999999621073895,
            0.9999999997158348,
            0.9999999999979082,
            1.0,
            1.0,
        ],
    ),
    (3.0, [1.0; 8]),
];

/// Adaptive Simpson quadrature of `g` over `[a, b]`.
pub fn simpson(g: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step(
        g: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (g(lm), g(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + step(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    let (fa, fb, fm) = (g(a), g(b), g(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(g, a, b, fa, fm, fb, whole, tol, 50)
}

/// Raw material for a random piecewise cubic: interval lengths and the
/// coefficients of every piece (constant terms after the first are replaced
/// to make the function continuous).
pub type RawPieces = (Vec<f64>, Vec<[f64; 4]>);

/// Breakpoints and continuous pieces built from raw material, using direct
/// evaluation for the continuity fix.
pub fn continuous_pieces(raw: &RawPieces) -> (Vec<f64>, Vec<Vec<f64>>) {
    let (lengths, coeffs) = raw;
    let mut breakpoints = vec![0.0];
    for l in lengths {
        let last = *breakpoints.last().unwrap();
        breakpoints.push(last + l);
    }
    let mut pieces: Vec<Vec<f64>> = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        let mut c = c.to_vec();
        if k > 0 {
            c[0] = eval_poly(&pieces[k - 1], lengths[k - 1]);
        }
        pieces.push(c);
    }
    (breakpoints, pieces)
}

/// `f` of a piecewise polynomial by direct evaluation.
pub fn eval_pieces(breakpoints: &[f64], pieces: &[Vec<f64>], t: f64) -> f64 {
    let k = (0..pieces.len())
        .rev()
        .find(|&k| breakpoints[k] <= t)
        .unwrap_or(0);
    eval_poly(&pieces[k], t - breakpoints[k])
}

/// `F` of a piecewise polynomial by direct summation of piece integrals.
pub fn primitive_pieces(breakpoints: &[f64], pieces: &[Vec<f64>], t: f64) -> f64 {
    let mut total = 0.0;
    for (k, c) in pieces.iter().enumerate() {
        let (a, b) = (breakpoints[k], breakpoints[k + 1]);
        if t <= a {
            break;
        }
        total += eval_primitive(c, t.min(b) - a);
    }
    total
}

/// Coefficients of `p(t + s)` given those of `p(t)`.
pub fn taylor_shift(c: &[f64], s: f64) -> Vec<f64> {
    let mut out = c.to_vec();
    let n = out.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            out[j] += s * out[j + 1];
        }
    }
    out
}
