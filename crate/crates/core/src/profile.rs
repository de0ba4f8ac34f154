//! Sampled realizations of catalog entries.
//!
//! Along a monotone branch the first integral
//! `(p-1)/p |u'|^p + F(u) = F(rho)` turns the problem into a quadrature: the
//! time at which the profile reaches level `v` is
//!
//! ```text
//! T(v) = ((p-1)/p)^{1/p} int_0^v ds / [F(rho) - F(s)]^{1/p}
//! ```
//!
//! and `u` is recovered by inverting `T`. The derivative comes from the first
//! integral itself. An explicit Runge-Kutta integration of the ODE is kept as
//! an independent oracle.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::classification::{boundary_slope, ProfileEntry, ProfileKind};
use crate::error::{Error, Result};
use crate::nonlinearity::{find_zero, NonlinearitySpec, ORDER_REL_TOL};
use crate::poly;
use crate::quadrature::{self, Tolerance};

const QUAD_TOL: Tolerance = Tolerance {
    abs: 1e-13,
    rel: 1e-14,
    max_intervals: 4000,
};

/// Minimum number of samples in a profile.
pub const MIN_SAMPLES: usize = 257;

/// The time-of-level map `T` for a given `(f, p, rho)`.
///
/// The gap `G(s) = F(rho) - F(s)` may vanish at either end of `[0, rho]`.
/// Near an end where `G ~ c |s - e|^k` with `k < p`, the substitution
/// `s = e +- sigma^{p/(p-k)}` makes the integrand bounded. Near `rho` with
/// `k >= p` the integral diverges; there `s = rho - e^{-w}` is used so that
/// levels close to `rho` stay well conditioned.
#[derive(Debug, Clone)]
pub struct TimeMap<'a> {
    spec: &'a NonlinearitySpec,
    p: f64,
    rho: f64,
    f_rho: f64,
    /// `G(rho - d) = d * horner(near_rho, -d)`.
    near_rho: Vec<f64>,
    taylor_from: f64,
    /// `G(s) = s^k * horner(near_zero, s)` on `[0, zero_taylor_to]`, where
    /// `k` is `order_at_zero` (only used when `k > 0`).
    near_zero: Vec<f64>,
    zero_taylor_to: f64,
    order_at_zero: u32,
    order_at_rho: u32,
    scale: f64,
}

impl<'a> TimeMap<'a> {
    pub fn new(spec: &'a NonlinearitySpec, p: f64, rho: f64) -> Result<Self> {
        if !(p > 1.0) {
            return Err(Error::Argument(format!("p must exceed 1, got {p}")));
        }
        if !(rho > 0.0 && rho <= spec.cap()) {
            return Err(Error::Argument(format!(
                "rho = {rho} must lie in (0, {}]",
                spec.cap()
            )));
        }
        let tol = spec.primitive_tol();
        let mut f_rho = spec.big_f(rho);
        if f_rho.abs() <= tol {
            f_rho = 0.0;
        }
        if f_rho < 0.0 {
            return Err(Error::Consistency(format!("F(rho) = {f_rho} < F(0) = 0")));
        }
        for z in spec.isolate_zeros() {
            if z.z > 0.0 && z.z < rho && spec.big_f(z.z) >= f_rho - tol {
                return Err(Error::Consistency(format!(
                    "F({}) >= F(rho) inside (0, rho)",
                    z.z
                )));
            }
        }

        let mut taylor = spec.taylor_at(rho, false);
        let (m, _) = poly::leading_term(&taylor, 0, ORDER_REL_TOL).ok_or(Error::ZeroContinuum {
            start: rho,
            end: rho,
        })?;
        // Coefficients below the leading order are rounding residue of an
        // inexact root; left in place they dominate the gap right below rho.
        for q in taylor.iter_mut().take(m as usize) {
            *q = 0.0;
        }
        let near_rho: Vec<f64> = taylor
            .iter()
            .enumerate()
            .map(|(j, q)| q / (j + 1) as f64)
            .collect();
        let (piece, _) = spec.locate(rho);
        let piece_start = spec.breakpoints()[if spec.breakpoints()[piece] == rho && piece > 0 {
            piece - 1
        } else {
            piece
        }];

        let order_at_zero = if f_rho == 0.0 {
            spec.leading_order_at_zero().0 + 1
        } else {
            0
        };
        if order_at_zero as f64 >= p {
            return Err(Error::Divergent { level: 0.0 });
        }
        let near_zero: Vec<f64> = if order_at_zero > 0 {
            let c = spec.taylor_at(0.0, true);
            let k = order_at_zero as usize;
            (k - 1..c.len()).map(|j| -c[j] / (j + 1) as f64).collect()
        } else {
            Vec::new()
        };
        Ok(TimeMap {
            spec,
            p,
            rho,
            f_rho,
            near_rho,
            taylor_from: piece_start.max(0.5 * rho),
            near_zero,
            zero_taylor_to: spec.breakpoints()[1].min(0.5 * rho),
            order_at_zero,
            order_at_rho: m + 1,
            scale: ((p - 1.0) / p).powf(1.0 / p),
        })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Whether the profile reaches `rho` in finite time.
    pub fn reaches_rho(&self) -> bool {
        (self.order_at_rho as f64) < self.p
    }

    /// `F(rho) - F(rho - d)` for `0 <= d <= rho`.
    fn gap_below_rho(&self, d: f64) -> f64 {
        let s = self.rho - d;
        if s >= self.taylor_from {
            d * poly::horner(&self.near_rho, -d)
        } else {
            self.f_rho - self.spec.big_f(s)
        }
    }

    /// `G(rho - d) / d^k` with `k = order_at_rho`, finite and positive as
    /// `d -> 0`.
    fn gap_ratio_below_rho(&self, d: f64) -> f64 {
        let k = self.order_at_rho as usize;
        if self.rho - d >= self.taylor_from {
            let sign = if (k - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * poly::horner(&self.near_rho[k - 1..], -d)
        } else {
            self.gap_below_rho(d) / d.powi(k as i32)
        }
    }

    /// `G(s) / s^k` with `k = order_at_zero > 0`.
    fn gap_ratio_above_zero(&self, s: f64) -> f64 {
        if s <= self.zero_taylor_to {
            poly::horner(&self.near_zero, s)
        } else {
            self.gap(s) / s.powi(self.order_at_zero as i32)
        }
    }

    /// `G(s) = F(rho) - F(s)`.
    pub fn gap(&self, s: f64) -> f64 {
        if s >= self.taylor_from {
            self.gap_below_rho(self.rho - s)
        } else {
            self.f_rho - self.spec.big_f(s)
        }
    }

    /// `|u'|` at level `s` from the first integral.
    pub fn speed(&self, s: f64) -> f64 {
        (self.p / (self.p - 1.0) * self.gap(s).max(0.0)).powf(1.0 / self.p)
    }

    /// `dT/dv` at level `v`.
    fn slowness(&self, v: f64) -> f64 {
        self.scale * self.gap(v).powf(-1.0 / self.p)
    }

    fn integrate(&self, g: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
        let bad = Cell::new(None);
        let guarded = |x: f64| {
            let y = g(x);
            if !y.is_finite() && bad.get().is_none() {
                bad.set(Some(x));
            }
            y
        };
        match quadrature::integrate(guarded, a, b, QUAD_TOL) {
            Ok(est) => Ok(est.value),
            Err(e) => match bad.get() {
                Some(x) => Err(Error::Consistency(format!(
                    "non-positive gap F(rho) - F(s) at transformed node {x}"
                ))),
                None => Err(e),
            },
        }
    }

    /// `int_a^b ds / G(s)^{1/p}` times `((p-1)/p)^{1/p}`, `0 <= a <= b <= rho`.
    fn segment(&self, a: f64, b: f64) -> Result<f64> {
        let p = self.p;
        let mid = 0.5 * self.rho;
        let mut total = 0.0;
        if a < mid {
            let b0 = b.min(mid);
            total += if self.order_at_zero == 0 {
                self.integrate(|s| self.scale * self.gap(s).powf(-1.0 / p), a, b0)?
            } else {
                let q = p / (p - self.order_at_zero as f64);
                // With s = sigma^q the powers of sigma cancel exactly.
                self.integrate(
                    |sig| self.scale * q * self.gap_ratio_above_zero(sig.powf(q)).powf(-1.0 / p),
                    a.powf(1.0 / q),
                    b0.powf(1.0 / q),
                )?
            };
        }
        if b > mid {
            let da = self.rho - a.max(mid);
            let db = self.rho - b;
            if self.reaches_rho() {
                let q = p / (p - self.order_at_rho as f64);
                total += self.integrate(
                    |sig| self.scale * q * self.gap_ratio_below_rho(sig.powf(q)).powf(-1.0 / p),
                    db.powf(1.0 / q),
                    da.powf(1.0 / q),
                )?;
            } else {
                if db <= 0.0 {
                    return Err(Error::Divergent { level: self.rho });
                }
                total += self.integrate(
                    |w| {
                        let d = (-w).exp();
                        self.scale * self.gap_below_rho(d).powf(-1.0 / p) * d
                    },
                    -da.ln(),
                    -db.ln(),
                )?;
            }
        }
        Ok(total)
    }

    /// `T(v)`: time for the profile to rise from `0` to level `v`.
    pub fn time_of_level(&self, v: f64) -> Result<f64> {
        if !(v >= 0.0 && v <= self.rho) {
            return Err(Error::Argument(format!(
                "level {v} outside [0, {}]",
                self.rho
            )));
        }
        if v == self.rho && !self.reaches_rho() {
            return Err(Error::Divergent { level: v });
        }
        self.segment(0.0, v)
    }

    /// `T(rho)` when finite.
    pub fn arrival_time(&self) -> Result<Option<f64>> {
        if self.reaches_rho() {
            self.segment(0.0, self.rho).map(Some)
        } else {
            Ok(None)
        }
    }

    /// Levels `u(t)` for ascending, nonnegative `times`.
    ///
    /// Each level is found by safeguarded Newton iteration on
    /// `T(u) - t` inside a bracket, with `T` accumulated from the previous
    /// level. After the arrival time the level stays at `rho`. Levels too
    /// close to `rho` to be resolved in floating point saturate at the
    /// largest representable bracket end.
    pub fn invert(&self, times: &[f64]) -> Result<Vec<f64>> {
        let arrival = self.arrival_time()?;
        let rho = self.rho;
        let mut out = Vec::with_capacity(times.len());
        let (mut lo, mut t_lo) = (0.0_f64, 0.0_f64);
        for &t in times {
            if !(t >= 0.0) {
                return Err(Error::Argument(format!("negative time {t}")));
            }
            if t <= t_lo {
                out.push(lo);
                continue;
            }
            if let Some(te) = arrival {
                if t >= te {
                    lo = rho;
                    t_lo = te;
                    out.push(rho);
                    continue;
                }
            }

            // Bracket: halve the distance to rho until T(hi) >= t.
            let mut hi = lo;
            let mut t_hi = t_lo;
            let mut d = rho - lo;
            let mut saturated = false;
            loop {
                d *= 0.5;
                let cand = rho - d;
                if cand <= lo || cand >= rho {
                    saturated = true;
                    break;
                }
                let tc = t_lo + self.segment(lo, cand)?;
                if tc >= t {
                    hi = cand;
                    t_hi = tc;
                    break;
                }
                // Not far enough: the candidate becomes the new lower end.
                lo = cand;
                t_lo = tc;
                d = rho - lo;
            }
            if saturated {
                out.push(lo);
                continue;
            }

            let (mut a, mut b) = (lo, hi);
            let frac = (t - t_lo) / (t_hi - t_lo);
            let mut x = if frac.is_finite() {
                lo + frac * (hi - lo)
            } else {
                0.5 * (lo + hi)
            };
            if !(x > a && x < b) {
                x = 0.5 * (a + b);
            }
            let mut best = (hi, t_hi);
            for _ in 0..200 {
                let tx = t_lo + self.segment(lo, x)?;
                let r = tx - t;
                if (r.abs()) < (best.1 - t).abs() {
                    best = (x, tx);
                }
                if r.abs() <= 1e-13 * (1.0 + t) {
                    break;
                }
                if r < 0.0 {
                    a = x;
                } else {
                    b = x;
                }
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                let newton = x - r / self.slowness(x);
                x = if newton > a && newton < b {
                    newton
                } else {
                    mid
                };
            }
            lo = best.0;
            t_lo = best.1;
            out.push(lo);
        }
        Ok(out)
    }
}

/// `T(v)` for the profile with limit or maximum `rho`.
pub fn time_of_level(spec: &NonlinearitySpec, p: f64, rho: f64, v: f64) -> Result<f64> {
    TimeMap::new(spec, p, rho)?.time_of_level(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub entry: ProfileEntry,
    pub t: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub max_first_integral_residual: f64,
    pub max_ode_residual: f64,
}

impl Profile {
    /// Assembles a profile and fills in both residual metrics.
    pub fn from_samples(
        spec: &NonlinearitySpec,
        p: f64,
        entry: ProfileEntry,
        t: Vec<f64>,
        u: Vec<f64>,
        du: Vec<f64>,
    ) -> Self {
        let mut prof = Profile {
            entry,
            t,
            u,
            du,
            max_first_integral_residual: 0.0,
            max_ode_residual: 0.0,
        };
        prof.max_first_integral_residual = first_integral_residual(&prof, spec, p);
        prof.max_ode_residual = ode_residual(&prof, spec, p);
        prof
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Linear interpolation of `u` at `t` (clamped to the sampled range).
    pub fn interpolate(&self, t: f64) -> f64 {
        let n = self.t.len();
        if t <= self.t[0] {
            return self.u[0];
        }
        if t >= self.t[n - 1] {
            return self.u[n - 1];
        }
        let i = self.t.partition_point(|&x| x <= t) - 1;
        let w = (t - self.t[i]) / (self.t[i + 1] - self.t[i]);
        self.u[i] + w * (self.u[i + 1] - self.u[i])
    }
}

fn uniform_grid(t_max: f64, n: usize) -> Result<Vec<f64>> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Argument(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    if n < MIN_SAMPLES {
        return Err(Error::Argument(format!(
            "need at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    let last = (n - 1) as f64;
    Ok((0..n).map(|i| t_max * i as f64 / last).collect())
}

fn check_entry(spec: &NonlinearitySpec, p: f64, entry: &ProfileEntry) -> Result<()> {
    let mismatch = |why: String| Err(Error::Argument(format!("entry/catalog mismatch: {why}")));
    match entry.kind {
        ProfileKind::Trivial => Ok(()),
        ProfileKind::Increasing => {
            let zeros = spec.isolate_zeros();
            if find_zero(&zeros, entry.rho).is_none() {
                return mismatch(format!("rho = {} is not a zero of f", entry.rho));
            }
            let slope = boundary_slope(spec, p, entry.rho)?;
            if (slope - entry.slope0).abs() > 1e-8 * (1.0 + slope) {
                return mismatch(format!("slope0 {} but F gives {slope}", entry.slope0));
            }
            Ok(())
        }
        ProfileKind::Periodic => {
            if entry.half_period.is_none_or(|t| !(t > 0.0)) {
                return mismatch("periodic entry without a positive half-period".into());
            }
            let big_f = spec.primitive(entry.rho)?;
            if big_f.abs() > spec.primitive_tol() || spec.f(entry.rho) <= 0.0 {
                return mismatch(format!("rho = {} is not in P_f", entry.rho));
            }
            Ok(())
        }
    }
}

/// Samples the catalog entry on a uniform grid of `n` points over `[0, t_max]`.
///
/// Periodic entries are built on `[0, t*]` and extended by
/// `u(t + 2k t*) = u(t)`, `u(t + (2k+1) t*) = u(t* - t)`.
pub fn build_profile(
    spec: &NonlinearitySpec,
    p: f64,
    entry: &ProfileEntry,
    t_max: f64,
    n: usize,
) -> Result<Profile> {
    let t = uniform_grid(t_max, n)?;
    check_entry(spec, p, entry)?;
    let (u, du) = match entry.kind {
        ProfileKind::Trivial => (vec![0.0; n], vec![0.0; n]),
        ProfileKind::Increasing => {
            let map = TimeMap::new(spec, p, entry.rho)?;
            let u = map.invert(&t)?;
            let du = u.iter().map(|&v| map.speed(v)).collect();
            (u, du)
        }
        ProfileKind::Periodic => {
            let map = TimeMap::new(spec, p, entry.rho)?;
            let t_star = entry.half_period.expect("checked above");
            let computed = map
                .arrival_time()?
                .ok_or(Error::Divergent { level: entry.rho })?;
            if (computed - t_star).abs() > 1e-8 * (1.0 + t_star) {
                return Err(Error::Argument(format!(
                    "entry/catalog mismatch: half-period {t_star} but quadrature gives {computed}"
                )));
            }
            let period = 2.0 * t_star;
            let reduced: Vec<(f64, f64)> = t
                .iter()
                .map(|&ti| {
                    let tau = ti % period;
                    if tau <= t_star {
                        (tau, 1.0)
                    } else {
                        ((period - tau).max(0.0), -1.0)
                    }
                })
                .collect();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&i, &j| reduced[i].0.total_cmp(&reduced[j].0));
            let sorted: Vec<f64> = order.iter().map(|&i| reduced[i].0).collect();
            let levels = map.invert(&sorted)?;
            let mut u = vec![0.0; n];
            let mut du = vec![0.0; n];
            for (k, &i) in order.iter().enumerate() {
                u[i] = levels[k];
                du[i] = reduced[i].1 * map.speed(levels[k]);
            }
            (u, du)
        }
    };
    Ok(Profile::from_samples(spec, p, *entry, t, u, du))
}

/// `sup |(p-1)/p |u'|^p + F(u) - F(rho)|` over the samples.
pub fn first_integral_residual(prof: &Profile, spec: &NonlinearitySpec, p: f64) -> f64 {
    let f_rho = spec.big_f(prof.entry.rho);
    prof.u
        .iter()
        .zip(&prof.du)
        .map(|(&u, &du)| ((p - 1.0) / p * du.abs().powf(p) + spec.big_f(u) - f_rho).abs())
        .fold(0.0, f64::max)
}

/// `sup |(p-1)|u'|^{p-2} u''_h + f(u)|` over interior samples with
/// `|u'| > 1e-6`, where `u''_h` is the centred second difference.
pub fn ode_residual(prof: &Profile, spec: &NonlinearitySpec, p: f64) -> f64 {
    let n = prof.t.len();
    if n < 3 {
        return 0.0;
    }
    (1..n - 1)
        .filter(|&i| prof.du[i].abs() > 1e-6)
        .map(|i| {
            let h0 = prof.t[i] - prof.t[i - 1];
            let h1 = prof.t[i + 1] - prof.t[i];
            let upp = 2.0 * (h0 * prof.u[i + 1] - (h0 + h1) * prof.u[i] + h1 * prof.u[i - 1])
                / (h0 * h1 * (h0 + h1));
            ((p - 1.0) * prof.du[i].abs().powf(p - 2.0) * upp + spec.f(prof.u[i])).abs()
        })
        .fold(0.0, f64::max)
}

/// Fixed-order RK4 with step-doubling error control on an autonomous
/// two-component system.
struct Rk4<'r> {
    rhs: &'r dyn Fn([f64; 2]) -> [f64; 2],
    h: f64,
    tol: f64,
}

const H_MIN: f64 = 1e-12;

impl Rk4<'_> {
    fn step(&self, y: [f64; 2], h: f64) -> [f64; 2] {
        let add = |y: [f64; 2], k: [f64; 2], c: f64| [y[0] + c * k[0], y[1] + c * k[1]];
        let k1 = (self.rhs)(y);
        let k2 = (self.rhs)(add(y, k1, 0.5 * h));
        let k3 = (self.rhs)(add(y, k2, 0.5 * h));
        let k4 = (self.rhs)(add(y, k3, h));
        [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ]
    }

    /// Advances from `t0` to `t1`; `post` projects each accepted state and
    /// `watch` sees every accepted step as `(t_old, y_old, t_new, y_new)`.
    fn advance(
        &mut self,
        mut y: [f64; 2],
        t0: f64,
        t1: f64,
        post: &dyn Fn([f64; 2]) -> [f64; 2],
        watch: &mut dyn FnMut(f64, [f64; 2], f64, [f64; 2]),
    ) -> [f64; 2] {
        let mut t = t0;
        while t < t1 {
            let h = self.h.min(t1 - t);
            let full = post(self.step(y, h));
            let half = post(self.step(post(self.step(y, 0.5 * h)), 0.5 * h));
            let err = (full[0] - half[0]).abs().max((full[1] - half[1]).abs());
            if err <= self.tol || h <= H_MIN {
                let t_new = if h == t1 - t { t1 } else { t + h };
                watch(t, y, t_new, half);
                y = half;
                t = t_new;
                if err < self.tol / 32.0 && h == self.h {
                    self.h = (2.0 * self.h).min(0.05);
                }
            } else {
                self.h = 0.5 * h;
            }
        }
        y
    }
}

/// Integrates the ODE directly as an independent check on [`build_profile`].
///
/// On monotone stretches with `u' > 0` the first-order equation
/// `u' = ((p/(p-1)) (F(rho) - F(u)))^{1/p}` is integrated. Where the start
/// is degenerate (`u'(0) = 0`) and for periodic solutions the flux form
/// `u' = |w|^{1/(p-1)} sgn w`, `w' = -f(u)` is used instead, which passes
/// through turning points without special treatment. The half-period of a
/// periodic solution is read off the first sign change of `w`.
pub fn oracle_integrate(
    spec: &NonlinearitySpec,
    p: f64,
    rho: f64,
    kind: ProfileKind,
    t_max: f64,
    n: usize,
) -> Result<Profile> {
    let t = uniform_grid(t_max, n)?;
    if !(p > 1.0) {
        return Err(Error::Argument(format!("p must exceed 1, got {p}")));
    }
    if kind == ProfileKind::Trivial {
        return Ok(Profile::from_samples(
            spec,
            p,
            ProfileEntry::trivial(),
            t,
            vec![0.0; n],
            vec![0.0; n],
        ));
    }
    let f_rho = spec.primitive(rho)?;
    let cap = spec.cap();
    let c = p / (p - 1.0);
    let speed = move |u: f64| (c * (f_rho - spec.big_f(u)).max(0.0)).powf(1.0 / p);
    let flux_inv = move |w: f64| w.signum() * w.abs().powf(1.0 / (p - 1.0));

    let first_order = move |y: [f64; 2]| [speed(y[0].min(rho)), 0.0];
    let flux = move |y: [f64; 2]| [flux_inv(y[1]), -spec.f(y[0].clamp(0.0, cap))];
    let clamp_level = move |y: [f64; 2]| [y[0].clamp(0.0, rho), y[1]];
    let identity = |y: [f64; 2]| y;

    let degenerate = kind == ProfileKind::Periodic || speed(0.0) == 0.0;
    let mut use_flux = degenerate;
    let mut y = [0.0, 0.0];
    let mut u = vec![0.0; n];
    let mut du = vec![0.0; n];
    du[0] = if use_flux { 0.0 } else { speed(0.0) };
    let mut half_period: Option<f64> = None;
    let mut stepper_flux = Rk4 {
        rhs: &flux,
        h: 1e-4,
        tol: 1e-13,
    };
    let mut stepper_first = Rk4 {
        rhs: &first_order,
        h: 1e-4,
        tol: 1e-13,
    };

    for i in 1..n {
        if use_flux {
            let mut watch = |t0: f64, y0: [f64; 2], t1: f64, y1: [f64; 2]| {
                if half_period.is_none() && t0 > 0.0 && y0[1] > 0.0 && y1[1] <= 0.0 {
                    let w = y0[1] / (y0[1] - y1[1]);
                    half_period = Some(t0 + w * (t1 - t0));
                }
            };
            y = stepper_flux.advance(y, t[i - 1], t[i], &identity, &mut watch);
            u[i] = y[0];
            du[i] = flux_inv(y[1]);
            if kind == ProfileKind::Increasing && y[0] >= 0.5 * rho {
                use_flux = false;
                stepper_first.h = stepper_flux.h;
            }
        } else {
            y = stepper_first.advance(y, t[i - 1], t[i], &clamp_level, &mut |_, _, _, _| {});
            u[i] = y[0];
            du[i] = speed(y[0]);
        }
    }
    let entry = ProfileEntry {
        kind,
        rho,
        slope0: du[0],
        half_period: if kind == ProfileKind::Periodic {
            half_period
        } else {
            None
        },
    };
    Ok(Profile::from_samples(spec, p, entry, t, u, du))
}
