//! Box-constrained energy descent shared by the ball and strip solvers.
//!
//! Directions come from a limited-memory BFGS two-loop recursion restricted
//! to the free variables; every trial point is projected back into the box
//! and accepted by an Armijo test along the projection arc. A failed line
//! search discards the curvature memory and retries along the projected
//! steepest descent direction.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentOptions {
    pub max_iter: usize,
    /// Number of curvature pairs kept.
    pub memory: usize,
    /// Stop once the energy decrease per step falls below
    /// `rel_decrease * (1 + |E|)` for `stall_steps` consecutive steps.
    pub rel_decrease: f64,
    pub stall_steps: usize,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    pub max_backtracks: usize,
    /// Additionally require `max |projected gradient| <= grad_tol` before
    /// stopping on the energy criterion, unless the gradient is already
    /// below the change a one-ulp move of the iterate would cause.
    pub grad_tol: f64,
}

impl Default for DescentOptions {
    fn default() -> Self {
        DescentOptions {
            max_iter: 200_000,
            memory: 10,
            rel_decrease: 1e-12,
            stall_steps: 3,
            armijo: 1e-4,
            max_backtracks: 60,
            grad_tol: f64::INFINITY,
        }
    }
}

/// While stalled above `grad_tol`, compare the projected gradient with its
/// floating-point resolution every this many steps.
const RESOLUTION_CHECK: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct Descent {
    pub x: Vec<f64>,
    pub energy: f64,
    pub iterations: usize,
    /// Energy before the first step and after every accepted step.
    pub trace: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn project(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((v, &lo), &hi) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.clamp(lo, hi);
    }
}

/// Coordinates held at a bound by a gradient pointing out of the box.
fn active_set(x: &[f64], g: &[f64], lower: &[f64], upper: &[f64]) -> Vec<bool> {
    (0..x.len())
        .map(|i| (x[i] <= lower[i] && g[i] > 0.0) || (x[i] >= upper[i] && g[i] < 0.0))
        .collect()
}

/// Largest projected-gradient component.
fn projected_gradient(x: &[f64], g: &[f64], lower: &[f64], upper: &[f64]) -> f64 {
    active_set(x, g, lower, upper)
        .iter()
        .zip(g)
        .filter(|(a, _)| !**a)
        .fold(0.0_f64, |m, (_, v)| m.max(v.abs()))
}

/// Largest change of the free gradient components when every free
/// coordinate moves by one ulp against the gradient. A projected gradient
/// below this level cannot be reduced reliably in floating point; this
/// happens for `p < 2`, where the flux `|d|^{p-1}` jumps by a large amount
/// as a difference `d` leaves zero by a single ulp.
fn gradient_resolution(
    energy: &impl Fn(&[f64], &mut [f64]) -> f64,
    x: &[f64],
    g: &[f64],
    lower: &[f64],
    upper: &[f64],
) -> f64 {
    let active = active_set(x, g, lower, upper);
    let mut y = x.to_vec();
    for i in 0..x.len() {
        if !active[i] && g[i] != 0.0 {
            y[i] = if g[i] > 0.0 {
                x[i].next_down()
            } else {
                x[i].next_up()
            };
        }
    }
    project(&mut y, lower, upper);
    let mut gy = vec![0.0; x.len()];
    energy(&y, &mut gy);
    (0..x.len())
        .filter(|&i| !active[i])
        .fold(0.0_f64, |m, i| m.max((gy[i] - g[i]).abs()))
}

/// Minimizes `energy` over the box `[lower, upper]` starting from `x0`.
///
/// `energy(x, grad)` returns the energy and writes its gradient.
pub fn minimize_box(
    energy: impl Fn(&[f64], &mut [f64]) -> f64,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    opts: &DescentOptions,
) -> Result<Descent> {
    descend(energy, None, None, x0, lower, upper, opts)
}

/// As [`minimize_box`], with steps judged by `difference(x, y) = E(y) - E(x)`
/// instead of by subtracting two energies. Near a minimizer the decrease
/// per step falls below the rounding error of `E` itself, and a difference
/// evaluated from the step keeps the line search working there. The energy
/// trace then accumulates the accepted differences.
pub fn minimize_box_with_difference(
    energy: impl Fn(&[f64], &mut [f64]) -> f64,
    difference: impl Fn(&[f64], &[f64]) -> f64,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    opts: &DescentOptions,
) -> Result<Descent> {
    descend(energy, Some(&difference), None, x0, lower, upper, opts)
}

/// As [`minimize_box_with_difference`], with a preconditioner.
/// `precondition(x, active, q)` overwrites `q` with `M^{-1} q`, where `M` is a
/// symmetric positive definite approximation of the Hessian at `x` restricted
/// to the coordinates not flagged in `active` (`q` is zero on the flagged
/// ones and must stay so). `M^{-1}` seeds every quasi-Newton direction in
/// place of a multiple of the identity.
pub fn minimize_box_preconditioned(
    energy: impl Fn(&[f64], &mut [f64]) -> f64,
    difference: impl Fn(&[f64], &[f64]) -> f64,
    precondition: impl Fn(&[f64], &[bool], &mut [f64]),
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    opts: &DescentOptions,
) -> Result<Descent> {
    descend(
        energy,
        Some(&difference),
        Some(&precondition),
        x0,
        lower,
        upper,
        opts,
    )
}

type Difference<'a> = Option<&'a dyn Fn(&[f64], &[f64]) -> f64>;
type Preconditioner<'a> = Option<&'a dyn Fn(&[f64], &[bool], &mut [f64])>;

fn descend(
    energy: impl Fn(&[f64], &mut [f64]) -> f64,
    difference: Difference<'_>,
    precondition: Preconditioner<'_>,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    opts: &DescentOptions,
) -> Result<Descent> {
    let n = x0.len();
    if lower.len() != n || upper.len() != n {
        return Err(Error::Argument(
            "bound vectors do not match the unknowns".into(),
        ));
    }
    let mut x = x0.to_vec();
    project(&mut x, lower, upper);
    let mut g = vec![0.0; n];
    let mut e = energy(&x, &mut g);
    let mut trace = vec![e];
    if n == 0 {
        return Ok(Descent {
            x,
            energy: e,
            iterations: 0,
            trace,
        });
    }

    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut stall = 0;
    let mut trial = vec![0.0; n];
    let mut g_trial = vec![0.0; n];

    for iter in 1..=opts.max_iter {
        let active = active_set(&x, &g, lower, upper);
        let free_g: Vec<f64> = g
            .iter()
            .zip(&active)
            .map(|(&gi, &a)| if a { 0.0 } else { gi })
            .collect();
        if free_g.iter().all(|&v| v == 0.0) {
            return Ok(Descent {
                x,
                energy: e,
                iterations: iter - 1,
                trace,
            });
        }

        let mut accepted = false;
        for attempt in 0..2 {
            let steepest = attempt == 1 || (pairs.is_empty() && precondition.is_none());
            let mut d = if steepest {
                free_g.iter().map(|v| -v).collect()
            } else {
                two_loop(&free_g, &pairs, |q: &mut [f64]| {
                    match (precondition, pairs.back()) {
                        (Some(pc), _) => pc(&x, &active, q),
                        (None, Some((s, y, _))) => {
                            let gamma = dot(s, y) / dot(y, y);
                            q.iter_mut().for_each(|v| *v *= gamma);
                        }
                        (None, None) => {}
                    }
                })
            };
            for (di, &a) in d.iter_mut().zip(&active) {
                if a {
                    *di = 0.0;
                }
            }
            if dot(&d, &free_g) >= 0.0 {
                if steepest {
                    break;
                }
                continue;
            }
            // Steepest and preconditioned steps move no coordinate by more
            // than a tenth of the box span at first.
            let mut alpha = if steepest || precondition.is_some() {
                let dmax = d.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                let span = lower
                    .iter()
                    .zip(upper)
                    .map(|(l, u)| u - l)
                    .filter(|w| w.is_finite())
                    .fold(0.0_f64, f64::max);
                if span > 0.0 {
                    (0.1 * span / dmax).min(1.0)
                } else {
                    1.0 / dmax
                }
            } else {
                1.0
            };
            for _ in 0..opts.max_backtracks {
                for i in 0..n {
                    trial[i] = x[i] + alpha * d[i];
                }
                project(&mut trial, lower, upper);
                if trial == x {
                    // The step no longer changes any coordinate.
                    break;
                }
                let e_trial = energy(&trial, &mut g_trial);
                let delta = match difference {
                    Some(diff) if e_trial.is_finite() => diff(&x, &trial),
                    _ => e_trial - e,
                };
                let descent: f64 = (0..n).map(|i| g[i] * (trial[i] - x[i])).sum();
                if delta.is_finite() && delta <= opts.armijo * descent && delta <= 0.0 {
                    let s: Vec<f64> = (0..n).map(|i| trial[i] - x[i]).collect();
                    let y: Vec<f64> = (0..n).map(|i| g_trial[i] - g[i]).collect();
                    let sy = dot(&s, &y);
                    if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
                        if pairs.len() == opts.memory {
                            pairs.pop_front();
                        }
                        pairs.push_back((s, y, 1.0 / sy));
                    }
                    let decrease = -delta;
                    std::mem::swap(&mut x, &mut trial);
                    std::mem::swap(&mut g, &mut g_trial);
                    e = if difference.is_some() {
                        e + delta
                    } else {
                        e_trial
                    };
                    trace.push(e);
                    if decrease < opts.rel_decrease * (1.0 + e.abs()) {
                        stall += 1;
                    } else {
                        stall = 0;
                    }
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if accepted {
                break;
            }
            pairs.clear();
        }
        if !accepted {
            // No representable decrease along the projected gradient.
            return Ok(Descent {
                x,
                energy: e,
                iterations: iter - 1,
                trace,
            });
        }
        if stall >= opts.stall_steps {
            let pg = projected_gradient(&x, &g, lower, upper);
            let resolved = pg <= opts.grad_tol
                || ((stall - opts.stall_steps).is_multiple_of(RESOLUTION_CHECK)
                    && pg <= gradient_resolution(&energy, &x, &g, lower, upper));
            if resolved {
                return Ok(Descent {
                    x,
                    energy: e,
                    iterations: iter,
                    trace,
                });
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        energy: e,
        trace,
        last: x,
    })
}

/// `-H g` from the stored pairs, with `initial` applying the starting
/// inverse Hessian.
fn two_loop(
    g: &[f64],
    pairs: &VecDeque<(Vec<f64>, Vec<f64>, f64)>,
    initial: impl FnOnce(&mut [f64]),
) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(pairs.len());
    for (s, y, rho) in pairs.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    initial(&mut q);
    for ((s, y, rho), a) in pairs.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q.iter().map(|v| -v).collect()
}
