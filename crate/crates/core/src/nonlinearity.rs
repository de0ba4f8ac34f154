//! The nonlinearity `f`: a continuous piecewise polynomial on `[0, M]`.
//!
//! Piece `k` is a polynomial in the shifted variable `t - b_k`, valid on
//! `[b_k, b_{k+1}]`. Continuity is enforced at construction by overwriting
//! each piece's constant coefficient with the value of its left neighbour at
//! the shared breakpoint, so `f` is exactly continuous in the representation.
//! The primitive `F(t) = int_0^t f` is kept as exact polynomial pieces plus
//! accumulated offsets.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;

/// Relative threshold below which a Taylor coefficient counts as zero when
/// reading off vanishing orders.
pub const ORDER_REL_TOL: f64 = 1e-9;

/// Largest continuity mismatch (relative to the coefficient scale) that is
/// silently repaired at construction.
const CONTINUITY_TOL: f64 = 1e-9;

/// Textual form of a nonlinearity, as found in run configuration documents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonlinearityDoc {
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NonlinearityDoc", into = "NonlinearityDoc")]
pub struct NonlinearitySpec {
    breakpoints: Vec<f64>,
    pieces: Vec<Vec<f64>>,
    primitives: Vec<Vec<f64>>,
    /// `F(b_k)` for every breakpoint.
    offsets: Vec<f64>,
}

impl TryFrom<NonlinearityDoc> for NonlinearitySpec {
    type Error = Error;

    fn try_from(doc: NonlinearityDoc) -> Result<Self> {
        if let (Some(cap), Some(&last)) = (doc.cap, doc.breakpoints.last()) {
            if cap != last {
                return Err(Error::InvalidSpec(format!(
                    "cap {cap} differs from the last breakpoint {last}"
                )));
            }
        }
        NonlinearitySpec::new(doc.breakpoints, doc.pieces)
    }
}

impl From<NonlinearitySpec> for NonlinearityDoc {
    fn from(spec: NonlinearitySpec) -> Self {
        NonlinearityDoc {
            cap: Some(spec.cap()),
            breakpoints: spec.breakpoints,
            pieces: spec.pieces,
        }
    }
}

impl NonlinearitySpec {
    pub fn new(breakpoints: Vec<f64>, mut pieces: Vec<Vec<f64>>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidSpec("need at least two breakpoints".into()));
        }
        if pieces.len() != breakpoints.len() - 1 {
            return Err(Error::InvalidSpec(format!(
                "{} breakpoints require {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len() - 1,
                pieces.len()
            )));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::InvalidSpec(format!(
                "first breakpoint must be 0, got {}",
                breakpoints[0]
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidSpec("breakpoints must be finite".into()));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpec(format!(
                "breakpoints must increase strictly ({} then {})",
                w[0], w[1]
            )));
        }
        for (k, piece) in pieces.iter_mut().enumerate() {
            if piece.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidSpec(format!(
                    "piece {k} has a non-finite coefficient"
                )));
            }
            if piece.is_empty() {
                piece.push(0.0);
            }
        }
        for k in 1..pieces.len() {
            let h = breakpoints[k] - breakpoints[k - 1];
            let left = poly::horner(&pieces[k - 1], h);
            let scale = poly::magnitude(&pieces[k - 1], h)
                .max(pieces[k][0].abs())
                .max(1.0);
            if (left - pieces[k][0]).abs() > CONTINUITY_TOL * scale {
                return Err(Error::InvalidSpec(format!(
                    "discontinuity at breakpoint {}: left value {left}, right value {}",
                    breakpoints[k], pieces[k][0]
                )));
            }
            pieces[k][0] = left;
        }

        let primitives: Vec<Vec<f64>> = pieces.iter().map(|c| poly::antiderivative(c)).collect();
        let mut offsets = Vec::with_capacity(breakpoints.len());
        offsets.push(0.0);
        for k in 0..pieces.len() {
            let h = breakpoints[k + 1] - breakpoints[k];
            offsets.push(offsets[k] + poly::horner(&primitives[k], h));
        }
        Ok(NonlinearitySpec {
            breakpoints,
            pieces,
            primitives,
            offsets,
        })
    }

    /// A single polynomial piece on `[0, cap]`.
    pub fn polynomial(coeffs: &[f64], cap: f64) -> Result<Self> {
        if !(cap > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "cap must be positive, got {cap}"
            )));
        }
        Self::new(vec![0.0, cap], vec![coeffs.to_vec()])
    }

    pub fn cap(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Vec<f64>] {
        &self.pieces
    }

    /// Multiplies `f` by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|c| c.iter().map(|a| a * factor).collect())
            .collect();
        Self::new(self.breakpoints.clone(), pieces).expect("scaling preserves validity")
    }

    fn check(&self, t: f64) -> Result<()> {
        if t >= 0.0 && t <= self.cap() {
            Ok(())
        } else {
            Err(Error::Domain {
                t,
                lo: 0.0,
                hi: self.cap(),
            })
        }
    }

    /// Piece index containing `t` (right-continuous at breakpoints) and the
    /// local coordinate. `t` is clamped to the window.
    pub(crate) fn locate(&self, t: f64) -> (usize, f64) {
        let t = t.clamp(0.0, self.cap());
        let k = self
            .breakpoints
            .partition_point(|&b| b <= t)
            .saturating_sub(1);
        let k = k.min(self.pieces.len() - 1);
        (k, t - self.breakpoints[k])
    }

    /// `f(t)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(self.f(t))
    }

    /// `F(t) = int_0^t f(s) ds`.
    pub fn primitive(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(self.big_f(t))
    }

    /// Unchecked `f`; arguments are clamped into the window.
    pub(crate) fn f(&self, t: f64) -> f64 {
        let (k, x) = self.locate(t);
        poly::horner(&self.pieces[k], x)
    }

    /// Unchecked `f'`, taken from the piece to the right at breakpoints.
    pub(crate) fn df(&self, t: f64) -> f64 {
        let (k, x) = self.locate(t);
        self.pieces[k]
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (i, &c)| acc * x + i as f64 * c)
    }

    /// Unchecked `F`; arguments are clamped into the window.
    pub(crate) fn big_f(&self, t: f64) -> f64 {
        let (k, x) = self.locate(t);
        self.offsets[k] + poly::horner(&self.primitives[k], x)
    }

    /// `F(t + d) - F(t)`, accurate relative to `d` when both ends lie in
    /// one piece.
    pub(crate) fn big_f_increment(&self, t: f64, d: f64) -> f64 {
        let (k, x) = self.locate(t);
        let (m, _) = self.locate(t + d);
        let window = 0.0..=self.cap();
        if k != m || !window.contains(&t) || !window.contains(&(t + d)) {
            return self.big_f(t + d) - self.big_f(t);
        }
        let c = poly::taylor_shift(&self.pieces[k], x);
        let integrated: Vec<f64> = c
            .iter()
            .enumerate()
            .map(|(j, v)| v / (j + 1) as f64)
            .collect();
        d * poly::horner(&integrated, d)
    }

    /// Zeros of `F` in `[a, b]`, located piece by piece on the exact
    /// primitive polynomials.
    pub(crate) fn primitive_zeros(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for (k, prim) in self.primitives.iter().enumerate() {
            let (lo, hi) = (self.breakpoints[k], self.breakpoints[k + 1]);
            if hi < a || lo > b {
                continue;
            }
            let mut c = prim.clone();
            c[0] += self.offsets[k];
            let (xa, xb) = (a.max(lo) - lo, b.min(hi) - lo);
            out.extend(poly::real_roots(&c, xa, xb).into_iter().map(|r| r.x + lo));
        }
        out.sort_by(f64::total_cmp);
        out
    }

    /// Absolute tolerance for deciding `F(a) == F(b)`.
    pub fn primitive_tol(&self) -> f64 {
        let scale = self.offsets.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        1e-12 * (1.0 + scale)
    }

    /// Taylor coefficients of `f` about `z`, in powers of `(t - z)`, taken
    /// from the piece to the right (`right = true`) or left of `z`.
    pub fn taylor_at(&self, z: f64, right: bool) -> Vec<f64> {
        let k = self.side_piece(z, right);
        poly::taylor_shift(&self.pieces[k], z - self.breakpoints[k])
    }

    fn side_piece(&self, z: f64, right: bool) -> usize {
        let (k, x) = self.locate(z);
        if !right && x == 0.0 && k > 0 {
            k - 1
        } else {
            k
        }
    }

    fn one_sided(&self, z: f64, right: bool) -> OneSided {
        let at_end = if right { z >= self.cap() } else { z <= 0.0 };
        if at_end {
            return OneSided::Boundary;
        }
        let k = self.side_piece(z, right);
        if poly::is_zero(&self.pieces[k]) {
            return OneSided::Flat;
        }
        let shifted = poly::taylor_shift(&self.pieces[k], z - self.breakpoints[k]);
        match poly::leading_term(&shifted, 1, ORDER_REL_TOL) {
            Some((order, coeff)) => OneSided::Leading { order, coeff },
            None => OneSided::Flat,
        }
    }

    /// Leading-order behaviour `f(t) ~ c t^m` as `t -> 0+`, with `m = 0` when
    /// `f(0) != 0`.
    pub fn leading_order_at_zero(&self) -> (u32, f64) {
        if poly::is_zero(&self.pieces[0]) {
            return (0, 0.0);
        }
        poly::leading_term(&self.pieces[0], 0, ORDER_REL_TOL).unwrap_or((0, 0.0))
    }

    /// Every zero of `f` in `[0, M]`, ascending.
    ///
    /// Pieces on which `f` vanishes identically are merged into continua and
    /// reported as a single non-isolated entry located at the left end of the
    /// span; isolated zeros inside or touching a continuum are absorbed.
    pub fn isolate_zeros(&self) -> Vec<ZeroInfo> {
        let nb = self.breakpoints.len();
        let mut spans: Vec<(f64, f64)> = Vec::new();
        for (k, piece) in self.pieces.iter().enumerate() {
            if poly::is_zero(piece) {
                let (a, b) = (self.breakpoints[k], self.breakpoints[k + 1]);
                match spans.last_mut() {
                    Some(last) if last.1 == a => last.1 = b,
                    _ => spans.push((a, b)),
                }
            }
        }
        let in_span = |z: f64| spans.iter().any(|&(a, b)| z >= a && z <= b);

        let mut found: Vec<poly::Root> = Vec::new();
        // Breakpoint values are exact: constant coefficients, or the end of
        // the last piece.
        for j in 0..nb {
            let (val, mag) = if j < nb - 1 {
                (self.pieces[j][0], self.pieces[j][0].abs())
            } else {
                let h = self.breakpoints[j] - self.breakpoints[j - 1];
                let c = &self.pieces[j - 1];
                (poly::horner(c, h), poly::magnitude(c, h))
            };
            if val.abs() <= 32.0 * f64::EPSILON * mag {
                let b = self.breakpoints[j];
                found.push(poly::Root { x: b, lo: b, hi: b });
            }
        }
        for (k, piece) in self.pieces.iter().enumerate() {
            if poly::is_zero(piece) {
                continue;
            }
            let b = self.breakpoints[k];
            let h = self.breakpoints[k + 1] - b;
            for r in poly::real_roots(piece, 0.0, h) {
                found.push(poly::Root {
                    x: b + r.x,
                    lo: b + r.lo,
                    hi: b + r.hi,
                });
            }
        }
        // Exact entries first so they win deduplication.
        found.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.width().total_cmp(&q.width())));
        let mut zeros: Vec<poly::Root> = Vec::new();
        for r in found {
            match zeros.last() {
                Some(prev) if (r.x - prev.x).abs() <= 1e-11 * (1.0 + prev.x.abs()) => {}
                _ => zeros.push(r),
            }
        }

        let mut out: Vec<ZeroInfo> = spans
            .iter()
            .map(|&(a, b)| ZeroInfo {
                z: a,
                enclosure: (a, a),
                left: self.one_sided(a, false),
                right: OneSided::Flat,
                isolated: false,
                span: Some((a, b)),
            })
            .collect();
        out.extend(zeros.into_iter().filter(|r| !in_span(r.x)).map(|r| {
            let left = self.one_sided(r.x, false);
            let right = self.one_sided(r.x, true);
            ZeroInfo {
                z: r.x,
                enclosure: (r.lo, r.hi),
                isolated: !matches!(left, OneSided::Flat) && !matches!(right, OneSided::Flat),
                left,
                right,
                span: None,
            }
        }));
        out.sort_by(|p, q| p.z.total_cmp(&q.z));
        out
    }

    /// The first zero continuum, if any.
    pub fn continuum(&self) -> Option<(f64, f64)> {
        self.isolate_zeros().into_iter().find_map(|z| z.span)
    }
}

/// Local behaviour of `f` on one side of a zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OneSided {
    /// The zero sits at the end of the analysis window on this side.
    Boundary,
    /// `f` vanishes identically on this side.
    Flat,
    /// `f(t) ~ coeff * (t - z)^order`.
    Leading { order: u32, coeff: f64 },
}

/// One element of the zero set of `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroInfo {
    pub z: f64,
    /// Certified bracket; degenerate when the zero is exact.
    pub enclosure: (f64, f64),
    pub right: OneSided,
    pub left: OneSided,
    pub isolated: bool,
    /// Extent of a zero continuum; `None` for isolated zeros.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub span: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmpVerdict {
    pub holds_right: bool,
    pub holds_left: bool,
}

impl SmpVerdict {
    pub fn holds(&self) -> bool {
        self.holds_right && self.holds_left
    }
}

/// Leading-order decision rule for the one-sided growth conditions
///
/// `liminf_{t->z+} f(t)/(t-z)^{p-1} > -inf` and
/// `limsup_{t->z-} f(t)/(z-t)^{p-1} < +inf`.
pub fn check_smp(p: f64, zero: &ZeroInfo) -> Result<SmpVerdict> {
    if !(p > 1.0) {
        return Err(Error::Argument(format!("p must exceed 1, got {p}")));
    }
    if !zero.isolated {
        return Err(Error::ZeroContinuum {
            start: zero.span.map_or(zero.z, |s| s.0),
            end: zero.span.map_or(zero.z, |s| s.1),
        });
    }
    let holds_right = match zero.right {
        OneSided::Leading { order, coeff } => order as f64 >= p - 1.0 || coeff > 0.0,
        _ => true,
    };
    let holds_left = match zero.left {
        OneSided::Leading { order, coeff } => {
            let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
            order as f64 >= p - 1.0 || coeff * sign < 0.0
        }
        _ => true,
    };
    Ok(SmpVerdict {
        holds_right,
        holds_left,
    })
}

/// Finds the zero of `f` at `rho`, matching within a relative `1e-9`.
pub fn find_zero(zeros: &[ZeroInfo], rho: f64) -> Option<&ZeroInfo> {
    zeros.iter().find(|z| match z.span {
        Some((a, b)) => rho >= a && rho <= b,
        None => (z.z - rho).abs() <= 1e-9 * (1.0 + rho.abs()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoZeroLeft {
    pub holds: bool,
    pub epsilon: f64,
}

/// Largest `eps <= rho` such that `f` has no zero in `(rho - eps, rho)`.
pub fn check_no_zero_left_of(spec: &NonlinearitySpec, rho: f64) -> Result<NoZeroLeft> {
    let zeros = spec.isolate_zeros();
    let here = find_zero(&zeros, rho)
        .ok_or_else(|| Error::Argument(format!("{rho} is not a zero of f")))?;
    if here.span.is_some_and(|(a, _)| a < rho) || matches!(here.left, OneSided::Flat) {
        return Ok(NoZeroLeft {
            holds: false,
            epsilon: 0.0,
        });
    }
    let below = zeros
        .iter()
        .filter(|z| !std::ptr::eq(*z, here))
        .map(|z| z.span.map_or(z.z, |s| s.1))
        .filter(|&top| top < rho)
        .fold(None, |m: Option<f64>, top| {
            Some(m.map_or(top, |m| m.max(top)))
        });
    let epsilon = match below {
        Some(top) => rho - top,
        None => rho,
    };
    Ok(NoZeroLeft {
        holds: epsilon > 0.0,
        epsilon,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::NotApplicable => "not-applicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: String,
}

impl Verdict {
    fn new(status: Status, witness: impl Into<String>) -> Self {
        Verdict {
            status,
            witness: witness.into(),
        }
    }

    fn from_bool(holds: bool, witness: impl Into<String>) -> Self {
        Self::new(if holds { Status::Holds } else { Status::Fails }, witness)
    }
}

pub mod hypothesis {
    //! Keys of [`super::HypothesisReport::verdicts`].
    pub const SIGN_PATTERN: &str = "sign_pattern";
    pub const SMP_AT_RHO: &str = "smp_at_rho";
    pub const GROWTH_AT_ZERO: &str = "growth_at_zero";
    pub const DIMENSION: &str = "dimension_condition";
    pub const LIMIT_P_GE_2: &str = "limit_at_zero_p_ge_2";
}

/// Verdicts for the hypotheses of the half-space rigidity result for
/// nonlinearities with a single positive zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub p: f64,
    pub dimension: u32,
    pub verdicts: BTreeMap<String, Verdict>,
    /// `(p-1)(N-1)/(N-p-1)`, present only when `N > p + 1`.
    pub gamma: Option<f64>,
    pub leading_order_at_zero: (u32, f64),
    pub rho: Option<f64>,
}

impl HypothesisReport {
    pub fn status(&self, key: &str) -> Option<Status> {
        self.verdicts.get(key).map(|v| v.status)
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts.values().all(|v| v.status != Status::Fails)
    }
}

pub fn gamma(p: f64, n: u32) -> Option<f64> {
    let n = n as f64;
    (n > p + 1.0).then(|| (p - 1.0) * (n - 1.0) / (n - p - 1.0))
}

pub fn check_thm13(spec: &NonlinearitySpec, p: f64, n: u32) -> Result<HypothesisReport> {
    use hypothesis::*;
    if !(p > 1.0) {
        return Err(Error::Argument(format!("p must exceed 1, got {p}")));
    }
    if n < 2 {
        return Err(Error::Argument(format!(
            "dimension must be at least 2, got {n}"
        )));
    }
    let mut verdicts = BTreeMap::new();
    let zeros = spec.isolate_zeros();
    let na = || Verdict::new(Status::NotApplicable, "no admissible rho");

    let mut rho = None;
    if let Some(c) = zeros.iter().find(|z| !z.isolated) {
        let (a, b) = c.span.unwrap_or((c.z, c.z));
        verdicts.insert(
            SIGN_PATTERN.into(),
            Verdict::new(Status::Fails, format!("f vanishes on [{a}, {b}]")),
        );
    } else {
        match zeros.iter().find(|z| z.z > 0.0) {
            None => {
                verdicts.insert(
                    SIGN_PATTERN.into(),
                    Verdict::new(Status::Fails, "f has no positive zero in the window"),
                );
            }
            Some(first) => {
                let r = first.z;
                rho = Some(r);
                let positive_below = spec.f(0.5 * r) > 0.0;
                let next = zeros.iter().find(|z| z.z > r).map(|z| z.z);
                let cap = spec.cap();
                let negative_above = next.is_none() && (r >= cap || spec.f(0.5 * (r + cap)) < 0.0);
                let witness = if !positive_below {
                    format!("f({}) = {} <= 0", 0.5 * r, spec.f(0.5 * r))
                } else if let Some(z) = next {
                    format!("further zero at {z}")
                } else if !negative_above {
                    format!("f >= 0 somewhere on ({r}, {cap}]")
                } else {
                    format!("rho = {r}")
                };
                verdicts.insert(
                    SIGN_PATTERN.into(),
                    Verdict::from_bool(positive_below && negative_above, witness),
                );
                let smp = check_smp(p, first)?;
                verdicts.insert(
                    SMP_AT_RHO.into(),
                    Verdict::from_bool(
                        smp.holds(),
                        format!(
                            "right {}, left {} at z = {r}",
                            smp.holds_right, smp.holds_left
                        ),
                    ),
                );
            }
        }
    }
    verdicts.entry(SMP_AT_RHO.into()).or_insert_with(na);

    let (m, c) = spec.leading_order_at_zero();
    let g = gamma(p, n);
    let growth = match g {
        Some(g) => Verdict::from_bool(
            c > 0.0 && m as f64 <= g,
            format!("f(t) ~ {c} t^{m} near 0, gamma = {g}"),
        ),
        None => Verdict::from_bool(
            c > 0.0,
            format!(
                "f(t) ~ {c} t^{m} near 0, N <= p + 1 so gamma = {} is admissible",
                (m as f64).max(1.0)
            ),
        ),
    };
    verdicts.insert(GROWTH_AT_ZERO.into(), growth);

    let dim = if g.is_some() {
        let lhs = n as f64 * (p - 2.0) + 2.0;
        Verdict::from_bool(lhs >= 0.0, format!("N(p-2)+2 = {lhs}"))
    } else {
        Verdict::new(Status::NotApplicable, "N <= p + 1")
    };
    verdicts.insert(DIMENSION.into(), dim);

    let limit = if p >= 2.0 {
        let mf = m as f64;
        if mf > p - 1.0 {
            Verdict::new(
                Status::Holds,
                format!("f(t)/t^(p-1) -> 0 (m = {m} > p - 1)"),
            )
        } else if mf < p - 1.0 {
            Verdict::from_bool(
                c > 0.0,
                format!(
                    "f(t)/t^(p-1) -> {} infinity (m = {m} < p - 1)",
                    if c > 0.0 { "+" } else { "-" }
                ),
            )
        } else {
            Verdict::from_bool(c > 0.0, format!("f(t)/t^(p-1) -> {c} (m = p - 1)"))
        }
    } else {
        Verdict::new(Status::NotApplicable, "p < 2")
    };
    verdicts.insert(LIMIT_P_GE_2.into(), limit);

    Ok(HypothesisReport {
        p,
        dimension: n,
        verdicts,
        gamma: g,
        leading_order_at_zero: (m, c),
        rho,
    })
}
