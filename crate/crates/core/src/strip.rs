//! Two-dimensional strip solutions of `-Delta_p u = f(u)`.
//!
//! The half plane is truncated to `[0, W) x [0, H]`, periodic in `x`, with
//! `u = 0` on the bottom row and `u = u_rho(H)` on the top row. The discrete
//! energy is minimized by the same projected descent as the ball solver, and
//! the result is compared with the one-dimensional profile `u_rho(y)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classification::{catalog, ProfileEntry};
use crate::descent::{minimize_box_with_difference, DescentOptions};
use crate::error::{Error, Result};
use crate::nonlinearity::NonlinearitySpec;
use crate::profile::{build_profile, Profile, TimeMap, MIN_SAMPLES};

/// Minimum number of nodes per direction.
pub const MIN_NODES: usize = 33;

/// Floor on `|grad u|` inside the factor `|grad u|^{p-2}` of the gradient.
const GRAD_FLOOR: f64 = 1e-12;

/// Projected-gradient tolerance used by [`default_options`].
pub const GRAD_TOL: f64 = 1e-12;

/// Descent options for strip solves: the energy stall rule plus a
/// projected-gradient bound tight enough to resolve row monotonicity.
pub fn default_options() -> DescentOptions {
    DescentOptions {
        grad_tol: GRAD_TOL,
        ..DescentOptions::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripGeometry {
    pub width: f64,
    pub height: f64,
    pub nx: usize,
    pub ny: usize,
}

impl StripGeometry {
    pub fn hx(&self) -> f64 {
        self.width / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        self.height / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.hy()
    }

    fn validate(&self) -> Result<()> {
        if !(self.width > 0.0
            && self.height > 0.0
            && self.width.is_finite()
            && self.height.is_finite())
        {
            return Err(Error::Argument(format!(
                "strip dimensions must be positive, got W = {}, H = {}",
                self.width, self.height
            )));
        }
        if self.nx < MIN_NODES || self.ny < MIN_NODES {
            return Err(Error::Argument(format!(
                "need at least {MIN_NODES} nodes per direction, got {} x {}",
                self.nx, self.ny
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Init {
    /// `u_rho(y) + 0.1 sin(2 pi x / W) sin(pi y / H)`, shifted laterally by
    /// `shift` cells.
    PerturbedProfile {
        shift: usize,
    },
    /// Independent uniform values in `[0, rho]` on interior rows.
    Random {
        seed: u64,
    },
    Zero,
    /// A full row-major field; boundary rows are overwritten.
    Field {
        values: Vec<f64>,
    },
}

/// Row-major nodal values, `u[j * nx + i]` at `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSolution {
    pub width: f64,
    pub height: f64,
    pub nx: usize,
    pub ny: usize,
    pub rho: f64,
    pub top_value: f64,
    pub u: Vec<f64>,
    pub energy: f64,
    pub iterations: usize,
    pub symmetry_deviation: f64,
    pub profile_mismatch: f64,
    pub trace: Vec<f64>,
}

impl GridSolution {
    pub fn geometry(&self) -> StripGeometry {
        StripGeometry {
            width: self.width,
            height: self.height,
            nx: self.nx,
            ny: self.ny,
        }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.u[j * self.nx + i]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.u[j * self.nx..(j + 1) * self.nx]
    }

    pub fn row_means(&self) -> Vec<f64> {
        (0..self.ny)
            .map(|j| self.row(j).iter().sum::<f64>() / self.nx as f64)
            .collect()
    }

    /// `max_i u(i, j) - min_i u(i, j)` for every row.
    pub fn row_oscillations(&self) -> Vec<f64> {
        (0..self.ny)
            .map(|j| {
                let row = self.row(j);
                let hi = row.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
                let lo = row.iter().fold(f64::INFINITY, |m, &v| m.min(v));
                hi - lo
            })
            .collect()
    }

    /// Largest `u(i, j) - u(i, j + 1)` over the grid; nonpositive for fields
    /// that are nondecreasing in `y`.
    pub fn max_vertical_drop(&self) -> f64 {
        (0..self.ny - 1)
            .flat_map(|j| (0..self.nx).map(move |i| (i, j)))
            .map(|(i, j)| self.at(i, j) - self.at(i, j + 1))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Maximum over rows of the lateral oscillation.
pub fn symmetry_deviation(sol: &GridSolution) -> f64 {
    sol.row_oscillations().into_iter().fold(0.0, f64::max)
}

/// `sup |u(i, j) - u_rho(y_j)|` with the profile interpolated linearly.
pub fn compare_to_profile(sol: &GridSolution, prof: &Profile) -> Result<f64> {
    let t_end = *prof.t.last().unwrap_or(&0.0);
    if prof.t.first() != Some(&0.0) || t_end < sol.height * (1.0 - 1e-12) {
        return Err(Error::Argument(format!(
            "profile covers [0, {t_end}] but the strip has height {}",
            sol.height
        )));
    }
    let geom = sol.geometry();
    let mut worst = 0.0_f64;
    for j in 0..sol.ny {
        let target = prof.interpolate(geom.y(j));
        for &v in sol.row(j) {
            worst = worst.max((v - target).abs());
        }
    }
    Ok(worst)
}

/// Discrete strip energy and its gradient.
///
/// At every node `|grad u|^2` is the average of the squared forward and
/// backward differences in each direction (one-sided on the boundary rows);
/// boundary rows carry weight 1/2.
#[derive(Debug, Clone)]
pub struct StripEnergy<'a> {
    spec: &'a NonlinearitySpec,
    p: f64,
    geom: StripGeometry,
    bottom: f64,
    top: f64,
}

impl<'a> StripEnergy<'a> {
    pub fn new(spec: &'a NonlinearitySpec, p: f64, geom: StripGeometry, top: f64) -> Self {
        StripEnergy {
            spec,
            p,
            geom,
            bottom: 0.0,
            top,
        }
    }

    /// Number of unknowns (interior rows).
    pub fn unknowns(&self) -> usize {
        self.geom.nx * (self.geom.ny - 2)
    }

    /// Full field from the interior unknowns.
    pub fn assemble(&self, interior: &[f64]) -> Vec<f64> {
        let nx = self.geom.nx;
        let mut u = Vec::with_capacity(nx * self.geom.ny);
        u.extend(std::iter::repeat_n(self.bottom, nx));
        u.extend_from_slice(interior);
        u.extend(std::iter::repeat_n(self.top, nx));
        u
    }

    fn row_weight(&self, j: usize) -> f64 {
        if j == 0 || j == self.geom.ny - 1 {
            0.5
        } else {
            1.0
        }
    }

    /// Energy of a full field.
    pub fn energy(&self, u: &[f64]) -> f64 {
        let (nx, ny) = (self.geom.nx, self.geom.ny);
        let (hx, hy) = (self.geom.hx(), self.geom.hy());
        let mut total = 0.0;
        for j in 0..ny {
            let mut row = 0.0;
            for i in 0..nx {
                let a = self.grad_sq(u, i, j);
                row += a.powf(0.5 * self.p) / self.p - self.spec.big_f(u[j * nx + i]);
            }
            total += self.row_weight(j) * row;
        }
        total * hx * hy
    }

    fn grad_sq(&self, u: &[f64], i: usize, j: usize) -> f64 {
        let (nx, ny) = (self.geom.nx, self.geom.ny);
        let (hx, hy) = (self.geom.hx(), self.geom.hy());
        let c = u[j * nx + i];
        let east = u[j * nx + (i + 1) % nx];
        let west = u[j * nx + (i + nx - 1) % nx];
        let gx = 0.5 * ((east - c).powi(2) + (c - west).powi(2)) / (hx * hx);
        let gy = if j == 0 {
            (u[nx + i] - c).powi(2)
        } else if j == ny - 1 {
            (c - u[(j - 1) * nx + i]).powi(2)
        } else {
            0.5 * ((u[(j + 1) * nx + i] - c).powi(2) + (c - u[(j - 1) * nx + i]).powi(2))
        } / (hy * hy);
        gx + gy
    }

    /// Change of `|grad u|^2` at node `(i, j)` when `u` moves by `du`.
    fn grad_sq_increment(&self, u: &[f64], du: &[f64], i: usize, j: usize) -> f64 {
        let (nx, ny) = (self.geom.nx, self.geom.ny);
        let (hx, hy) = (self.geom.hx(), self.geom.hy());
        let k = j * nx + i;
        // (a + b)^2 - a^2 for the difference a towards neighbour m.
        let term = |m: usize| {
            let (a, b) = (u[m] - u[k], du[m] - du[k]);
            b * (2.0 * a + b)
        };
        let gx = 0.5 * (term(j * nx + (i + 1) % nx) + term(j * nx + (i + nx - 1) % nx)) / (hx * hx);
        let gy = if j == 0 {
            term(nx + i)
        } else if j == ny - 1 {
            term((j - 1) * nx + i)
        } else {
            0.5 * (term((j + 1) * nx + i) + term((j - 1) * nx + i))
        } / (hy * hy);
        gx + gy
    }

    /// `E(to) - E(from)` for interior unknowns, evaluated from the step so
    /// that it stays accurate when it is far below the rounding error of `E`.
    pub fn energy_difference(&self, from: &[f64], to: &[f64]) -> f64 {
        let (nx, ny) = (self.geom.nx, self.geom.ny);
        let u = self.assemble(from);
        let mut du = vec![0.0; nx * ny];
        for (d, (a, b)) in du[nx..nx * (ny - 1)].iter_mut().zip(from.iter().zip(to)) {
            *d = b - a;
        }
        let half_p = 0.5 * self.p;
        let mut total = 0.0;
        for j in 0..ny {
            let mut row = 0.0;
            for i in 0..nx {
                let k = j * nx + i;
                let a = self.grad_sq(&u, i, j);
                let da = self.grad_sq_increment(&u, &du, i, j);
                let dpsi = if a > 0.0 {
                    a.powf(half_p) * (half_p * (da / a).ln_1p()).exp_m1()
                } else {
                    da.max(0.0).powf(half_p)
                };
                row += dpsi / self.p - self.spec.big_f_increment(u[k], du[k]);
            }
            total += self.row_weight(j) * row;
        }
        total * self.geom.hx() * self.geom.hy()
    }

    /// Energy and gradient with respect to the interior unknowns.
    pub fn energy_interior(&self, interior: &[f64], grad: &mut [f64]) -> f64 {
        let (nx, ny) = (self.geom.nx, self.geom.ny);
        let (hx, hy) = (self.geom.hx(), self.geom.hy());
        let u = self.assemble(interior);
        let mut coef = vec![0.0; nx * ny];
        let mut total = 0.0;
        for j in 0..ny {
            let w = self.row_weight(j);
            let mut row = 0.0;
            for i in 0..nx {
                let a = self.grad_sq(&u, i, j);
                row += a.powf(0.5 * self.p) / self.p - self.spec.big_f(u[j * nx + i]);
                coef[j * nx + i] = w * a.max(GRAD_FLOOR * GRAD_FLOOR).powf(0.5 * self.p - 1.0);
            }
            total += w * row;
        }

        let mut g = vec![0.0; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                let k = j * nx + i;
                let e = j * nx + (i + 1) % nx;
                let flux = 0.5 * (coef[k] + coef[e]) * (u[e] - u[k]) / (hx * hx);
                g[e] += flux;
                g[k] -= flux;
            }
        }
        // Vertical differences enter a boundary row's gradient with weight 1
        // and an interior row's with weight 1/2.
        let share = |j: usize| if j == 0 || j == ny - 1 { 1.0 } else { 0.5 };
        for j in 0..ny - 1 {
            for i in 0..nx {
                let k = j * nx + i;
                let n = k + nx;
                let flux =
                    (share(j) * coef[k] + share(j + 1) * coef[n]) * (u[n] - u[k]) / (hy * hy);
                g[n] += flux;
                g[k] -= flux;
            }
        }
        for j in 1..ny - 1 {
            for i in 0..nx {
                let k = j * nx + i;
                g[k] -= self.spec.f(u[k]);
            }
        }
        let cell = hx * hy;
        for (dst, src) in grad.iter_mut().zip(&g[nx..nx * (ny - 1)]) {
            *dst = src * cell;
        }
        total * cell
    }
}

/// Levels `u_rho(y_j)` of the increasing profile at every row height.
fn profile_rows(
    spec: &NonlinearitySpec,
    p: f64,
    rho: f64,
    geom: &StripGeometry,
) -> Result<Vec<f64>> {
    let heights: Vec<f64> = (0..geom.ny).map(|j| geom.y(j)).collect();
    TimeMap::new(spec, p, rho)?.invert(&heights)
}

fn increasing_entry(spec: &NonlinearitySpec, p: f64, rho: f64) -> Result<ProfileEntry> {
    let cat = catalog(spec, p)?;
    cat.increasing(rho).copied().ok_or_else(|| {
        let listed: Vec<f64> = cat.zero_sets.zf_star.clone();
        Error::hypothesis(
            "catalog contains an increasing entry with limit rho",
            format!("rho = {rho}, Z_f* = {listed:?}"),
        )
    })
}

/// Profile sampled on `[0, H]` so that every row height is a sample point.
pub fn strip_profile(
    spec: &NonlinearitySpec,
    p: f64,
    rho: f64,
    geom: &StripGeometry,
) -> Result<Profile> {
    let entry = increasing_entry(spec, p, rho)?;
    let steps = geom.ny - 1;
    let refine = (MIN_SAMPLES - 1).div_ceil(steps).max(1);
    build_profile(spec, p, &entry, geom.height, refine * steps + 1)
}

/// Minimizes the discrete strip energy.
pub fn solve_strip(
    spec: &NonlinearitySpec,
    p: f64,
    rho: f64,
    geom: StripGeometry,
    init: &Init,
    opts: &DescentOptions,
) -> Result<GridSolution> {
    if !(p > 1.0) {
        return Err(Error::Argument(format!("p must exceed 1, got {p}")));
    }
    geom.validate()?;
    let profile = strip_profile(spec, p, rho, &geom)?;
    let rows = profile_rows(spec, p, rho, &geom)?;
    let top = rows[geom.ny - 1];
    let model = StripEnergy::new(spec, p, geom, top);
    let (nx, ny) = (geom.nx, geom.ny);

    let x0: Vec<f64> = match init {
        Init::PerturbedProfile { shift } => (1..ny - 1)
            .flat_map(|j| (0..nx).map(move |i| (i, j)))
            .map(|(i, j)| {
                let x = geom.x((i + nx - shift % nx) % nx);
                let y = geom.y(j);
                rows[j]
                    + 0.1
                        * (2.0 * std::f64::consts::PI * x / geom.width).sin()
                        * (std::f64::consts::PI * y / geom.height).sin()
            })
            .collect(),
        Init::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            (0..model.unknowns())
                .map(|_| rng.random::<f64>() * rho)
                .collect()
        }
        Init::Zero => vec![0.0; model.unknowns()],
        Init::Field { values } => {
            if values.len() != nx * ny {
                return Err(Error::Argument(format!(
                    "initial field has {} values, expected {}",
                    values.len(),
                    nx * ny
                )));
            }
            values[nx..nx * (ny - 1)].to_vec()
        }
    };
    let lower = vec![0.0; x0.len()];
    let upper = vec![rho; x0.len()];
    let run = minimize_box_with_difference(
        |x, g| model.energy_interior(x, g),
        |x, y| model.energy_difference(x, y),
        &x0,
        &lower,
        &upper,
        opts,
    )?;
    let u = model.assemble(&run.x);
    let mut sol = GridSolution {
        width: geom.width,
        height: geom.height,
        nx,
        ny,
        rho,
        top_value: top,
        energy: model.energy(&u),
        u,
        iterations: run.iterations,
        symmetry_deviation: 0.0,
        profile_mismatch: 0.0,
        trace: run.trace,
    };
    sol.symmetry_deviation = symmetry_deviation(&sol);
    sol.profile_mismatch = compare_to_profile(&sol, &profile)?;
    Ok(sol)
}
