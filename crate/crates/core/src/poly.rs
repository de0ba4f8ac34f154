//! Dense univariate polynomials with coefficients in ascending degree.
//!
//! Only what the nonlinearity module needs: evaluation, calculus, Taylor
//! shifts and real-root isolation on a closed interval.

/// Evaluates `c[0] + c[1] x + ... + c[d] x^d` by Horner's rule.
pub fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// `sum |c_k| |x|^k`, the natural scale of rounding error in `horner(c, x)`.
pub fn magnitude(coeffs: &[f64], x: f64) -> f64 {
    let ax = x.abs();
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
}

/// Strips trailing zero coefficients. The zero polynomial becomes empty.
pub fn trim(coeffs: &[f64]) -> &[f64] {
    let len = coeffs.iter().rposition(|&c| c != 0.0).map_or(0, |i| i + 1);
    &coeffs[..len]
}

pub fn is_zero(coeffs: &[f64]) -> bool {
    coeffs.iter().all(|&c| c == 0.0)
}

pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

/// Antiderivative vanishing at 0.
pub fn antiderivative(coeffs: &[f64]) -> Vec<f64> {
    std::iter::once(0.0)
        .chain(coeffs.iter().enumerate().map(|(k, &c)| c / (k + 1) as f64))
        .collect()
}

/// Coefficients of `p(x0 + y)` as a polynomial in `y`.
pub fn taylor_shift(coeffs: &[f64], x0: f64) -> Vec<f64> {
    // Repeated synthetic division; exact for x0 = 0.
    let mut c = coeffs.to_vec();
    let n = c.len();
    if x0 == 0.0 {
        return c;
    }
    for i in 0..n {
        for k in (i..n - 1).rev() {
            c[k] += x0 * c[k + 1];
        }
    }
    c
}

/// Index and value of the first coefficient that is significant relative to
/// the largest one, starting at `from`. `None` if all are negligible.
pub fn leading_term(coeffs: &[f64], from: usize, rel_tol: f64) -> Option<(u32, f64)> {
    let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if scale == 0.0 {
        return None;
    }
    coeffs
        .iter()
        .enumerate()
        .skip(from)
        .find(|(_, c)| c.abs() > rel_tol * scale)
        .map(|(k, &c)| (k as u32, c))
}

/// A real root with a bracketing enclosure. `lo == hi` marks a root that was
/// resolved exactly (linear piece, exact rational, or a vanishing endpoint).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Root {
    fn exact(x: f64) -> Self {
        Root { x, lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Absolute enclosure width bisection refines to.
pub const ROOT_WIDTH: f64 = 1e-13;

fn negligible(coeffs: &[f64], x: f64) -> bool {
    horner(coeffs, x).abs() <= 32.0 * f64::EPSILON * magnitude(coeffs, x)
}

/// All real roots of `coeffs` in `[a, b]`, ascending, each reported once.
///
/// Critical points (roots of the derivative, found recursively) split the
/// interval into monotone segments; a segment with a sign change holds
/// exactly one root, refined by bisection. A critical point or endpoint at
/// which the polynomial is negligible is itself a root, which is how roots
/// of even multiplicity are caught. The zero polynomial has no isolated roots
/// and yields an empty list; callers must screen for it.
pub fn real_roots(coeffs: &[f64], a: f64, b: f64) -> Vec<Root> {
    let c = trim(coeffs);
    let mut roots = match c.len() {
        0 | 1 => Vec::new(),
        2 => {
            let x = -c[0] / c[1];
            if x >= a && x <= b {
                vec![Root::exact(x)]
            } else {
                Vec::new()
            }
        }
        _ => {
            let crit: Vec<f64> = real_roots(&derivative(c), a, b)
                .into_iter()
                .map(|r| r.x)
                .filter(|&x| x > a && x < b)
                .collect();
            let mut nodes = Vec::with_capacity(crit.len() + 2);
            nodes.push(a);
            nodes.extend(crit);
            nodes.push(b);
            nodes.dedup();

            let vanishes: Vec<bool> = nodes.iter().map(|&x| negligible(c, x)).collect();
            let mut out = Vec::new();
            for (i, &x) in nodes.iter().enumerate() {
                if vanishes[i] {
                    out.push(Root::exact(x));
                }
                if i + 1 < nodes.len() && !vanishes[i] && !vanishes[i + 1] {
                    let (ya, yb) = (horner(c, x), horner(c, nodes[i + 1]));
                    if ya.signum() != yb.signum() {
                        out.push(bisect(c, x, nodes[i + 1]));
                    }
                }
            }
            out
        }
    };
    for r in &mut roots {
        snap_rational(c, r);
    }
    roots.sort_by(|p, q| p.x.total_cmp(&q.x));
    roots.dedup_by(|q, p| (q.x - p.x).abs() <= 1e-12 * (1.0 + p.x.abs()));
    roots
}

fn bisect(c: &[f64], mut lo: f64, mut hi: f64) -> Root {
    let mut ylo = horner(c, lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= ROOT_WIDTH || mid <= lo || mid >= hi {
            break;
        }
        let ym = horner(c, mid);
        if ym == 0.0 {
            return Root::exact(mid);
        }
        if ym.signum() == ylo.signum() {
            lo = mid;
            ylo = ym;
        } else {
            hi = mid;
        }
    }
    Root {
        x: 0.5 * (lo + hi),
        lo,
        hi,
    }
}

/// Replaces an approximate root by a nearby small-denominator rational when
/// the rational lies in the enclosure and the polynomial vanishes there to
/// rounding accuracy.
fn snap_rational(c: &[f64], root: &mut Root) {
    if root.x == root.x.round() && negligible(c, root.x) {
        *root = Root::exact(root.x);
        return;
    }
    let slack = 1e-12 * (1.0 + root.x.abs());
    for q in convergents(root.x, 4096) {
        if q >= root.lo - slack && q <= root.hi + slack && negligible(c, q) {
            *root = Root::exact(q);
            return;
        }
    }
}

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
fn convergents(x: f64, max_den: u64) -> Vec<f64> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (1.0_f64, x.floor());
    let (mut k0, mut k1) = (0.0_f64, 1.0_f64);
    out.push(h1);
    let mut frac = x - x.floor();
    for _ in 0..40 {
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > max_den as f64 {
            break;
        }
        out.push(h2 / k2);
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xs(roots: &[Root]) -> Vec<f64> {
        roots.iter().map(|r| r.x).collect()
    }

    #[test]
    fn horner_and_calculus() {
        let c = [1.0, -3.0, 3.0, -1.0]; // (1 - t)^3
        assert_eq!(horner(&c, 1.0), 0.0);
        assert_eq!(derivative(&c), vec![-3.0, 6.0, -3.0]);
        assert_eq!(antiderivative(&[1.0, 2.0]), vec![0.0, 1.0, 1.0]);
        assert_eq!(trim(&[1.0, 0.0, 0.0]), &[1.0]);
    }

    #[test]
    fn taylor_shift_of_cube() {
        let shifted = taylor_shift(&[1.0, -3.0, 3.0, -1.0], 1.0);
        assert_eq!(shifted, vec![0.0, 0.0, 0.0, -1.0]);
        assert_eq!(leading_term(&shifted, 0, 1e-9), Some((3, -1.0)));
    }

    #[test]
    fn roots_of_factored_cubic() {
        // t - t^3 on [0, 2]
        let r = real_roots(&[0.0, 1.0, 0.0, -1.0], 0.0, 2.0);
        assert_eq!(xs(&r), vec![0.0, 1.0]);
        assert!(r.iter().all(|r| r.width() == 0.0));
    }

    #[test]
    fn triple_root_found_once() {
        let r = real_roots(&[1.0, -3.0, 3.0, -1.0], 0.0, 2.0);
        assert_eq!(xs(&r), vec![1.0]);
    }

    #[test]
    fn double_root_is_caught_at_critical_point() {
        // (t - 0.5)^2 = 0.25 - t + t^2
        let r = real_roots(&[0.25, -1.0, 1.0], 0.0, 1.0);
        assert_eq!(xs(&r), vec![0.5]);
    }

    #[test]
    fn close_roots_are_separated() {
        // t (1 - t)(t - 0.999) = -0.999 t + 1.999 t^2 - t^3
        let r = real_roots(&[0.0, -0.999, 1.999, -1.0], 0.0, 2.0);
        let x = xs(&r);
        assert_eq!(x.len(), 3);
        assert_eq!(x[0], 0.0);
        assert!((x[1] - 0.999).abs() <= 1e-12);
        assert!((x[2] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn irrational_root_enclosure() {
        // t^2 - 2 on [0, 2]
        let r = real_roots(&[-2.0, 0.0, 1.0], 0.0, 2.0);
        assert_eq!(r.len(), 1);
        assert!(r[0].width() <= 1e-12);
        assert!(r[0].lo <= std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 <= r[0].hi + 1e-15);
    }

    #[test]
    fn constant_has_no_roots() {
        assert!(real_roots(&[-1.0], 0.0, 1.0).is_empty());
        assert!(real_roots(&[], 0.0, 1.0).is_empty());
    }
}
