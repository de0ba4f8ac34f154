//! Radial minimizers of the truncated energy on balls.
//!
//! With `f` extended by `f(0)` below `0` and by `0` above `rho`, the energy
//!
//! ```text
//! I_r(u) = int_{B_r} (1/p |grad u|^p + F_rho(u)),   F_rho(t) = int_t^rho f
//! ```
//!
//! is coercive on `W_0^{1,p}(B_r)` and its minimizer is radial and
//! nonincreasing. The solver works with the radial profile on a uniform grid
//! and compares the sup norm of the minimizer with `rho - eps`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::descent::{minimize_box_preconditioned, DescentOptions};
use crate::error::{Error, Result};
use crate::nonlinearity::NonlinearitySpec;

/// Minimum number of radial intervals.
pub const MIN_INTERVALS: usize = 128;

/// Lower bound on slopes in the preconditioner, relative to `rho / r`.
const SLOPE_FLOOR: f64 = 1e-6;

/// Projected-gradient tolerance used by [`default_options`].
pub const GRAD_TOL: f64 = 1e-10;

/// Descent options for ball solves: the energy stop rule together with a
/// projected-gradient bound, so that gaps `rho - u` far below the energy
/// resolution are still resolved.
pub fn default_options() -> DescentOptions {
    DescentOptions {
        grad_tol: GRAD_TOL,
        ..DescentOptions::default()
    }
}

/// Truncation of `f` at `rho` and the shifted primitive `F_rho`.
#[derive(Debug, Clone, Copy)]
pub struct Truncated<'a> {
    spec: &'a NonlinearitySpec,
    rho: f64,
    f_at_rho: f64,
    f0: f64,
}

/// Checks `f(0) >= 0`, `f(rho) = 0` and `F_rho > 0` on `[0, rho)`.
pub fn truncate(spec: &NonlinearitySpec, rho: f64) -> Result<Truncated<'_>> {
    if !(rho > 0.0 && rho <= spec.cap()) {
        return Err(Error::Argument(format!(
            "rho = {rho} must lie in (0, {}]",
            spec.cap()
        )));
    }
    let f0 = spec.f(0.0);
    if f0 < 0.0 {
        return Err(Error::hypothesis(
            "f(0) >= 0",
            format!("t = 0, f(0) = {f0}"),
        ));
    }
    let frho = spec.f(rho);
    let scale = spec
        .pieces()
        .iter()
        .flatten()
        .fold(0.0_f64, |m, c| m.max(c.abs()));
    if frho.abs() > 1e-12 * (1.0 + scale) {
        return Err(Error::hypothesis(
            "f(rho) = 0",
            format!("t = {rho}, f(rho) = {frho}"),
        ));
    }
    let f_at_rho = spec.big_f(rho);
    let tol = spec.primitive_tol();
    // F is monotone between zeros of f, so F_rho attains its minimum over
    // [0, rho) at 0, at a zero of f, or just left of rho.
    let candidates = std::iter::once(0.0).chain(
        spec.isolate_zeros()
            .into_iter()
            .map(|z| z.z)
            .filter(|&z| z > 0.0 && z < rho),
    );
    for t in candidates {
        let gap = f_at_rho - spec.big_f(t);
        if gap <= tol {
            return Err(Error::hypothesis(
                "F_rho(t) > 0 on [0, rho)",
                format!("t = {t}, F_rho(t) = {gap}"),
            ));
        }
    }
    let lower = spec
        .breakpoints()
        .iter()
        .copied()
        .chain(spec.isolate_zeros().into_iter().map(|z| z.z))
        .filter(|&b| b < rho)
        .fold(0.0_f64, f64::max);
    let probe = 0.5 * (lower + rho);
    if spec.f(probe) <= 0.0 {
        return Err(Error::hypothesis(
            "F_rho(t) > 0 on [0, rho)",
            format!(
                "t = {probe}, f(t) = {} <= 0 just left of rho",
                spec.f(probe)
            ),
        ));
    }
    Ok(Truncated {
        spec,
        rho,
        f_at_rho,
        f0,
    })
}

impl Truncated<'_> {
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `f~(t)`.
    pub fn f(&self, t: f64) -> f64 {
        if t < 0.0 {
            self.f0
        } else if t > self.rho {
            0.0
        } else {
            self.spec.f(t)
        }
    }

    /// `f~'(t)`; zero outside `[0, rho]`.
    pub fn df(&self, t: f64) -> f64 {
        if (0.0..=self.rho).contains(&t) {
            self.spec.df(t)
        } else {
            0.0
        }
    }

    /// `F~_rho(t + d) - F~_rho(t)`, accurate relative to `d` inside
    /// `[0, rho]`.
    pub fn big_f_increment(&self, t: f64, d: f64) -> f64 {
        let range = 0.0..=self.rho;
        if range.contains(&t) && range.contains(&(t + d)) {
            -self.spec.big_f_increment(t, d)
        } else {
            self.big_f(t + d) - self.big_f(t)
        }
    }

    /// `F~_rho(t) = int_t^rho f~`.
    pub fn big_f(&self, t: f64) -> f64 {
        if t >= self.rho {
            0.0
        } else if t < 0.0 {
            self.f_at_rho - self.f0 * t
        } else {
            self.f_at_rho - self.spec.big_f(t)
        }
    }
}

/// Volume of the unit ball in `R^n`.
pub fn unit_ball_volume(n: u32) -> f64 {
    let mut w = if n.is_multiple_of(2) { 1.0 } else { 2.0 };
    let mut k = if n.is_multiple_of(2) { 2 } else { 3 };
    while k <= n {
        w *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    w
}

/// Discrete radial energy on the uniform grid `s_j = j r / J`.
///
/// Gradients live on the intervals with weight `s_{j+1/2}^{N-1}`, the
/// potential on the nodes with trapezoidal weights; the whole sum is scaled
/// by the unit sphere area `N omega_N` so that it approximates `I_r`.
#[derive(Debug, Clone)]
pub struct RadialEnergy<'a> {
    trunc: Truncated<'a>,
    p: f64,
    h: f64,
    area: f64,
    edge_w: Vec<f64>,
    node_w: Vec<f64>,
}

impl<'a> RadialEnergy<'a> {
    pub fn new(trunc: Truncated<'a>, p: f64, n: u32, r: f64, intervals: usize) -> Self {
        let h = r / intervals as f64;
        let dim = n as i32 - 1;
        let edge_w = (0..intervals)
            .map(|j| ((j as f64 + 0.5) * h).powi(dim) * h)
            .collect();
        let node_w = (0..=intervals)
            .map(|j| {
                let trap = if j == 0 || j == intervals { 0.5 } else { 1.0 };
                trap * (j as f64 * h).powi(dim) * h
            })
            .collect();
        RadialEnergy {
            trunc,
            p,
            h,
            area: n as f64 * unit_ball_volume(n),
            edge_w,
            node_w,
        }
    }

    /// Energy of the full nodal vector `u_0..u_J`.
    pub fn energy(&self, u: &[f64]) -> f64 {
        let grad: f64 = u
            .windows(2)
            .zip(&self.edge_w)
            .map(|(w, ew)| ((w[1] - w[0]) / self.h).abs().powf(self.p) / self.p * ew)
            .sum();
        let pot: f64 = u
            .iter()
            .zip(&self.node_w)
            .map(|(&v, nw)| self.trunc.big_f(v) * nw)
            .sum();
        self.area * (grad + pot)
    }

    /// `E(to) - E(from)` for free nodes, evaluated from the step.
    fn energy_difference(&self, from: &[f64], to: &[f64]) -> f64 {
        let j = from.len();
        let node = |v: &[f64], k: usize| if k < j { v[k] } else { 0.0 };
        let mut e_grad = 0.0;
        for k in 0..j {
            let d = (node(from, k + 1) - node(from, k)) / self.h;
            let step =
                ((node(to, k + 1) - node(from, k + 1)) - (node(to, k) - node(from, k))) / self.h;
            // |d + step|^p - |d|^p
            let change = if d != 0.0 && step / d > -1.0 {
                d.abs().powf(self.p) * (self.p * (step / d).ln_1p()).exp_m1()
            } else {
                (d + step).abs().powf(self.p) - d.abs().powf(self.p)
            };
            e_grad += change / self.p * self.edge_w[k];
        }
        let e_pot: f64 = (0..j)
            .map(|k| self.trunc.big_f_increment(from[k], to[k] - from[k]) * self.node_w[k])
            .sum();
        self.area * (e_grad + e_pot)
    }

    /// Energy and gradient with respect to the free nodes `u_0..u_{J-1}`
    /// (`u_J = 0`).
    fn energy_free(&self, free: &[f64], grad: &mut [f64]) -> f64 {
        let j = free.len();
        let node = |k: usize| if k < j { free[k] } else { 0.0 };
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut e_grad = 0.0;
        for k in 0..j {
            let d = (node(k + 1) - node(k)) / self.h;
            let ad = d.abs();
            e_grad += ad.powf(self.p) / self.p * self.edge_w[k];
            let flux = ad.powf(self.p - 1.0) * d.signum() * self.edge_w[k] / self.h;
            grad[k] -= flux;
            if k + 1 < j {
                grad[k + 1] += flux;
            }
        }
        let mut e_pot = self.trunc.big_f(0.0) * self.node_w[j];
        for k in 0..j {
            e_pot += self.trunc.big_f(free[k]) * self.node_w[k];
            grad[k] -= self.trunc.f(free[k]) * self.node_w[k];
        }
        grad.iter_mut().for_each(|g| *g *= self.area);
        self.area * (e_grad + e_pot)
    }

    /// Overwrites `q` with `M^{-1} q`, where `M` is the tridiagonal Hessian of
    /// the energy at `free` with slopes bounded away from zero and the
    /// potential part clipped to be nonnegative. Rows flagged in `active`
    /// are replaced by identity rows.
    fn precondition(&self, free: &[f64], active: &[bool], q: &mut [f64]) {
        let j = free.len();
        let node = |k: usize| if k < j { free[k] } else { 0.0 };
        let floor = SLOPE_FLOOR * self.trunc.rho / (self.h * j as f64);
        let mut diag: Vec<f64> = (0..j)
            .map(|k| self.node_w[k] * (-self.trunc.df(free[k])).max(0.0))
            .collect();
        let mut off = vec![0.0; j.saturating_sub(1)];
        for k in 0..j {
            let d = ((node(k + 1) - node(k)) / self.h).abs().max(floor);
            let a = (self.p - 1.0) * d.powf(self.p - 2.0) * self.edge_w[k] / (self.h * self.h);
            diag[k] += a;
            if k + 1 < j {
                diag[k + 1] += a;
                off[k] = -a;
            }
        }
        for k in 0..j {
            if active[k] {
                diag[k] = 1.0 / self.area;
                q[k] = 0.0;
                if k > 0 {
                    off[k - 1] = 0.0;
                }
                if k + 1 < j {
                    off[k] = 0.0;
                }
            }
        }
        // Thomas algorithm on the symmetric tridiagonal system.
        let mut c = vec![0.0; j];
        for k in 0..j {
            let lower = if k > 0 { off[k - 1] } else { 0.0 };
            let pivot = diag[k] - lower * if k > 0 { c[k - 1] } else { 0.0 };
            if k + 1 < j {
                c[k] = off[k] / pivot;
            }
            q[k] = (q[k] - if k > 0 { lower * q[k - 1] } else { 0.0 }) / pivot;
        }
        for k in (0..j.saturating_sub(1)).rev() {
            q[k] -= c[k] * q[k + 1];
        }
        q.iter_mut().for_each(|v| *v /= self.area);
    }
}

/// The plateau test function: `rho` on `[0, r-1]`, `rho (r - s)` on `[r-1, r]`.
pub fn plateau(rho: f64, r: f64, grid: &[f64]) -> Vec<f64> {
    grid.iter()
        .map(|&s| rho * (r - s).clamp(0.0, 1.0))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSolution {
    pub r: f64,
    #[serde(rename = "N")]
    pub n: u32,
    pub rho: f64,
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub energy: f64,
    pub sup_norm: f64,
    pub iterations: usize,
    /// Which start produced the returned minimizer.
    pub start: Start,
    /// Discrete energy of the plateau test function.
    pub plateau_energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Start {
    Zero,
    Plateau,
}

/// Minimizes the discrete truncated energy on `B_r` from `u = 0` and from the
/// plateau function, returning the lower-energy result.
pub fn minimize_radial(
    spec: &NonlinearitySpec,
    p: f64,
    n: u32,
    rho: f64,
    r: f64,
    intervals: usize,
    opts: &DescentOptions,
) -> Result<RadialSolution> {
    if !(p > 1.0) {
        return Err(Error::Argument(format!("p must exceed 1, got {p}")));
    }
    if n == 0 {
        return Err(Error::Argument("dimension N must be positive".into()));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Argument(format!("radius must be positive, got {r}")));
    }
    if intervals < MIN_INTERVALS {
        return Err(Error::Argument(format!(
            "need at least {MIN_INTERVALS} radial intervals, got {intervals}"
        )));
    }
    let trunc = truncate(spec, rho)?;
    let model = RadialEnergy::new(trunc, p, n, r, intervals);
    let grid: Vec<f64> = (0..=intervals)
        .map(|j| r * j as f64 / intervals as f64)
        .collect();
    let w_r = plateau(rho, r, &grid);
    let plateau_energy = model.energy(&w_r);
    let lower = vec![0.0; intervals];
    let upper = vec![rho; intervals];
    let run = |x0: &[f64]| {
        minimize_box_preconditioned(
            |x, g| model.energy_free(x, g),
            |x, y| model.energy_difference(x, y),
            |x, active, q| model.precondition(x, active, q),
            x0,
            &lower,
            &upper,
            opts,
        )
    };

    let from_zero = run(&vec![0.0; intervals])?;
    let from_plateau = run(&w_r[..intervals])?;
    let (best, start) = if from_plateau.energy < from_zero.energy {
        (from_plateau, Start::Plateau)
    } else {
        (from_zero, Start::Zero)
    };
    let mut u = monotone_projection(&best.x);
    u.push(0.0);
    let energy = model.energy(&u);
    let sup_norm = u.iter().fold(0.0_f64, |m, &v| m.max(v));
    Ok(RadialSolution {
        r,
        n,
        rho,
        grid,
        u,
        energy,
        sup_norm,
        iterations: best.iterations,
        start,
        plateau_energy,
    })
}

/// Least-squares projection onto nonincreasing vectors (pool adjacent
/// violators). Removes the sub-tolerance ripples that descent leaves on flat
/// parts of the minimizer.
pub fn monotone_projection(u: &[f64]) -> Vec<f64> {
    // Blocks of (sum, count), each with a mean below the previous one.
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(u.len());
    for &v in u {
        let mut block = (v, 1);
        while let Some(&(sum, count)) = blocks.last() {
            if sum / count as f64 >= block.0 / block.1 as f64 {
                break;
            }
            block = (block.0 + sum, block.1 + count);
            blocks.pop();
        }
        blocks.push(block);
    }
    blocks
        .into_iter()
        .flat_map(|(sum, count)| std::iter::repeat_n(sum / count as f64, count))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub r: f64,
    #[serde(rename = "J")]
    pub intervals: usize,
    pub sup_norm: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallScan {
    /// Least listed radius with `sup_norm >= rho - eps`.
    pub r0: f64,
    pub eps: f64,
    pub rho: f64,
    pub rows: Vec<ScanRow>,
    /// Whether `sup_norm` is nondecreasing along the scan.
    pub monotone: bool,
    pub solutions: Vec<RadialSolution>,
}

/// Solves on every radius of `r_list` (in parallel) and reports the first
/// radius whose minimizer reaches `rho - eps`.
#[allow(clippy::too_many_arguments)]
pub fn sup_norm_scan(
    spec: &NonlinearitySpec,
    p: f64,
    n: u32,
    rho: f64,
    eps: f64,
    r_list: &[f64],
    intervals: usize,
    opts: &DescentOptions,
) -> Result<BallScan> {
    if r_list.is_empty() {
        return Err(Error::Argument("empty radius list".into()));
    }
    if r_list.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Argument(
            "radius list must be strictly ascending".into(),
        ));
    }
    if !(eps > 0.0) {
        return Err(Error::Argument(format!("eps must be positive, got {eps}")));
    }
    truncate(spec, rho)?;
    let solutions: Vec<RadialSolution> = r_list
        .par_iter()
        .map(|&r| minimize_radial(spec, p, n, rho, r, intervals, opts))
        .collect::<Result<_>>()?;
    let rows: Vec<ScanRow> = solutions
        .iter()
        .map(|s| ScanRow {
            r: s.r,
            intervals,
            sup_norm: s.sup_norm,
            energy: s.energy,
        })
        .collect();
    let monotone = rows.windows(2).all(|w| w[1].sup_norm >= w[0].sup_norm);
    let r0 = rows
        .iter()
        .find(|row| row.sup_norm >= rho - eps)
        .map(|row| row.r)
        .ok_or_else(|| Error::ThresholdNotReached {
            eps,
            best: rows.iter().fold(0.0_f64, |m, row| m.max(row.sup_norm)),
        })?;
    Ok(BallScan {
        r0,
        eps,
        rho,
        rows,
        monotone,
        solutions,
    })
}
