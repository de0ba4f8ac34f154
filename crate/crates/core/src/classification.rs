//! Which bounded nonnegative solutions of the one-dimensional problem exist.
//!
//! For `u(0) = 0`, every nontrivial bounded solution is either a monotone
//! heteroclinic rising to a level `rho` in `Z_f*`, or (only when `f(0) < 0`)
//! the periodic solution oscillating between `0` and the level in `P_f`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlinearity::{check_smp, find_zero, NonlinearitySpec, ZeroInfo};
use crate::profile::TimeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSetReport {
    pub zf: Vec<ZeroInfo>,
    /// Positive levels that admit a monotone heteroclinic, ascending.
    pub zf_star: Vec<f64>,
    /// The zero of `f` with `F(z) = 0` and `F < 0` on `(0, z)`; needs `f(0) < 0`.
    pub zf0: Option<f64>,
    /// The level with `F(z) = 0`, `F < 0` on `(0, z)` and `f(z) > 0`.
    pub pf: Option<f64>,
    /// Whether the one-sided growth condition holds at every zero.
    pub smp_all: bool,
}

/// Computes `Z_f*`, `Z_f^0` and `P_f` for exponent `p`.
///
/// Membership in `Z_f*` asks for `F(t) < F(z)` on `[0, z)`. Since `F` is
/// monotone between consecutive zeros of `f`, it suffices to compare `F(z)`
/// against `F(0)` and `F` at earlier zeros, and to require `f > 0` just left
/// of `z`. Ties within [`NonlinearitySpec::primitive_tol`] count as failure.
pub fn special_zero_sets(spec: &NonlinearitySpec, p: f64) -> Result<ZeroSetReport> {
    if !(p > 1.0) {
        return Err(Error::Argument(format!("p must exceed 1, got {p}")));
    }
    let zf = spec.isolate_zeros();
    if let Some(c) = zf.iter().find(|z| !z.isolated) {
        let (start, end) = c.span.unwrap_or((c.z, c.z));
        return Err(Error::ZeroContinuum { start, end });
    }
    let tol = spec.primitive_tol();
    let mut smp_all = true;
    for z in &zf {
        smp_all &= check_smp(p, z)?.holds();
    }

    let mut zf_star = Vec::new();
    let mut running_max = 0.0_f64; // max of F(0) and F at earlier zeros
    let mut prev = 0.0;
    for z in &zf {
        if z.z > 0.0 {
            let fz = spec.big_f(z.z);
            let rising = spec.f(0.5 * (prev + z.z)) > 0.0;
            if rising && fz > running_max + tol {
                zf_star.push(z.z);
            }
            running_max = running_max.max(fz);
        }
        prev = z.z;
    }

    let (mut zf0, mut pf) = (None, None);
    if spec.f(0.0) < 0.0 {
        if let Some(level) = first_positive_root_of_primitive(spec, &zf, tol) {
            if find_zero(&zf, level).is_some() {
                zf0 = Some(level);
            } else if spec.f(level) > 0.0 {
                pf = Some(level);
            }
        }
    }
    if let Some(z) = zf0 {
        if !zf_star.contains(&z) {
            zf_star.push(z);
            zf_star.sort_by(f64::total_cmp);
        }
    }
    Ok(ZeroSetReport {
        zf,
        zf_star,
        zf0,
        pf,
        smp_all,
    })
}

/// First `z > 0` with `F(z) = 0`, scanning the monotone segments of `F`
/// delimited by the zeros of `f` and the breakpoints. Assumes `f(0) < 0`.
fn first_positive_root_of_primitive(
    spec: &NonlinearitySpec,
    zf: &[ZeroInfo],
    tol: f64,
) -> Option<f64> {
    let mut nodes: Vec<f64> = zf
        .iter()
        .map(|z| z.z)
        .chain(spec.breakpoints().iter().copied())
        .filter(|&x| x > 0.0)
        .collect();
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let mut lo = 0.0;
    for &x in &nodes {
        let fx = spec.big_f(x);
        if fx.abs() <= tol {
            return Some(x);
        }
        if fx > 0.0 {
            if let Some(&z) = spec.primitive_zeros(lo, x).iter().find(|&&z| z > lo) {
                return Some(z);
            }
            let (mut a, mut b) = (lo, x);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if b - a <= 1e-14 * (1.0 + b) || mid <= a || mid >= b {
                    break;
                }
                if spec.big_f(mid) < 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            return Some(0.5 * (a + b));
        }
        lo = x;
    }
    None
}

/// `u'(0) = ((p/(p-1)) F(rho))^{1/p}` for the heteroclinic rising to `rho`.
pub fn boundary_slope(spec: &NonlinearitySpec, p: f64, rho: f64) -> Result<f64> {
    let big_f = spec.primitive(rho)?;
    if big_f.abs() <= spec.primitive_tol() {
        return Ok(0.0);
    }
    if big_f < 0.0 {
        return Err(Error::Argument(format!(
            "F({rho}) = {big_f} < 0 admits no increasing profile"
        )));
    }
    Ok((p / (p - 1.0) * big_f).powf(1.0 / p))
}

/// Half-period `t*` of the periodic solution with maximum `rho` in `P_f`.
pub fn half_period(spec: &NonlinearitySpec, p: f64, rho: f64) -> Result<f64> {
    let sets = special_zero_sets(spec, p)?;
    match sets.pf {
        Some(level) if (level - rho).abs() <= 1e-9 * (1.0 + rho) => {
            TimeMap::new(spec, p, level)?.time_of_level(level)
        }
        _ => Err(Error::Argument(format!(
            "{rho} is not in P_f (P_f = {:?})",
            sets.pf
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Trivial,
    Increasing,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub kind: ProfileKind,
    /// Limit value (increasing) or maximum (periodic).
    pub rho: f64,
    /// `u'(0)`.
    pub slope0: f64,
    /// `t*`, periodic entries only.
    pub half_period: Option<f64>,
}

impl ProfileEntry {
    pub fn trivial() -> Self {
        ProfileEntry {
            kind: ProfileKind::Trivial,
            rho: 0.0,
            slope0: 0.0,
            half_period: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub p: f64,
    pub zero_sets: ZeroSetReport,
    /// Trivial first, then increasing entries by ascending `rho`, then the
    /// periodic entry.
    pub entries: Vec<ProfileEntry>,
    /// Set when the growth condition fails at some zero: the list is still
    /// produced but exhaustiveness is no longer guaranteed.
    pub outside_hypotheses: bool,
}

impl Catalog {
    pub fn nontrivial(&self) -> impl Iterator<Item = &ProfileEntry> {
        self.entries
            .iter()
            .filter(|e| e.kind != ProfileKind::Trivial)
    }

    pub fn increasing(&self, rho: f64) -> Option<&ProfileEntry> {
        self.entries.iter().find(|e| {
            e.kind == ProfileKind::Increasing && (e.rho - rho).abs() <= 1e-9 * (1.0 + rho)
        })
    }
}

pub fn catalog(spec: &NonlinearitySpec, p: f64) -> Result<Catalog> {
    let zero_sets = special_zero_sets(spec, p)?;
    let mut entries = vec![ProfileEntry::trivial()];
    for &rho in &zero_sets.zf_star {
        entries.push(ProfileEntry {
            kind: ProfileKind::Increasing,
            rho,
            slope0: boundary_slope(spec, p, rho)?,
            half_period: None,
        });
    }
    if let Some(rho) = zero_sets.pf {
        let t_star = TimeMap::new(spec, p, rho)?.time_of_level(rho)?;
        entries.push(ProfileEntry {
            kind: ProfileKind::Periodic,
            rho,
            slope0: 0.0,
            half_period: Some(t_star),
        });
    }
    Ok(Catalog {
        p,
        outside_hypotheses: !zero_sets.smp_all,
        zero_sets,
        entries,
    })
}
