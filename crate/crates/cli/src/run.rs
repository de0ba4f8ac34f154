//! The five pipelines. Each writes its artifacts into the output directory
//! and returns the list of files written.

use std::fs;
use std::path::{Path, PathBuf};

use plap_core::io::{field_rows, profile_rows, write_field_csv, write_profile_csv, write_scan_csv};
use plap_core::nonlinearity::{hypothesis, HypothesisReport};
use plap_core::strip::{solve_strip, Init, StripGeometry};
use plap_core::{
    ball, build_profile, catalog, check_thm13, strip, Error, NonlinearitySpec, ProfileKind,
};
use serde::Serialize;
use serde_json::json;

use crate::config::{
    Command, InitKind, RunConfig, DEFAULT_EPS, DEFAULT_INTERVALS, DEFAULT_SAMPLES, DEFAULT_T_MAX,
};
use crate::svg::{line_plot, Series};

/// Why a run stopped early.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<crate::config::ConfigError> for Failure {
    fn from(e: crate::config::ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl Failure {
    /// 1 for configuration and i/o problems, 2 for refusals, 3 for numerical
    /// failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 1,
            Failure::Core(e) if e.is_refusal() => 2,
            Failure::Core(
                Error::Domain { .. } | Error::InvalidSpec(_) | Error::Argument(_) | Error::Io(_),
            ) => 1,
            Failure::Core(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(msg) => f.write_str(msg),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}

pub struct Context {
    pub out: PathBuf,
    pub seed: u64,
    pub verbose: bool,
}

impl Context {
    fn log(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn write(&self, name: &str, bytes: &[u8], written: &mut Vec<PathBuf>) -> Result<(), Failure> {
        let path = self.out.join(name);
        fs::write(&path, bytes)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
        self.log(format!("wrote {}", path.display()));
        written.push(path);
        Ok(())
    }

    fn write_json(
        &self,
        name: &str,
        value: &impl Serialize,
        written: &mut Vec<PathBuf>,
    ) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| Failure::Config(format!("json: {e}")))?;
        text.push('\n');
        self.write(name, text.as_bytes(), written)
    }
}

fn csv_bytes(
    write: impl FnOnce(&mut Vec<u8>) -> plap_core::Result<()>,
) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

pub fn run(cfg: &RunConfig, ctx: &Context) -> Result<Vec<PathBuf>, Failure> {
    let spec = cfg.spec()?;
    ensure_dir(&ctx.out)?;
    ctx.log(format!("{:?} with p = {}", cfg.command, cfg.p));
    let mut written = Vec::new();
    match cfg.command {
        Command::Audit => audit(cfg, &spec, ctx, &mut written)?,
        Command::Classify => classify(cfg, &spec, ctx, &mut written)?,
        Command::Profile => profile(cfg, &spec, ctx, &mut written)?,
        Command::Ball => ball_scan(cfg, &spec, ctx, &mut written)?,
        Command::Strip => strip_solve(cfg, &spec, ctx, &mut written)?,
    }
    Ok(written)
}

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| {
        Failure::Config(format!(
            "cannot create output directory {}: {e}",
            dir.display()
        ))
    })
}

/// Hypothesis verdicts under the theorem's item labels.
fn labelled(report: &HypothesisReport) -> serde_json::Value {
    let labels = [
        ("(i)", hypothesis::SIGN_PATTERN),
        ("(ii)", hypothesis::SMP_AT_RHO),
        ("(iii)", hypothesis::GROWTH_AT_ZERO),
        ("N(p-2)+2>=0", hypothesis::DIMENSION),
        ("p>=2", hypothesis::LIMIT_P_GE_2),
    ];
    let conditions: serde_json::Map<String, serde_json::Value> = labels
        .iter()
        .filter_map(|(label, key)| {
            report.verdicts.get(*key).map(|v| {
                (
                    label.to_string(),
                    json!({ "key": key, "status": v.status, "witness": v.witness }),
                )
            })
        })
        .collect();
    json!({
        "p": report.p,
        "N": report.dimension,
        "rho": report.rho,
        "gamma": report.gamma,
        "leading_order_at_zero": { "m": report.leading_order_at_zero.0, "c": report.leading_order_at_zero.1 },
        "all_hold": report.all_hold(),
        "conditions": conditions,
    })
}

fn audit(
    cfg: &RunConfig,
    spec: &NonlinearitySpec,
    ctx: &Context,
    written: &mut Vec<PathBuf>,
) -> Result<(), Failure> {
    let report = check_thm13(spec, cfg.p, cfg.n.expect("validated"))?;
    for (key, v) in &report.verdicts {
        ctx.log(format!("{key}: {} ({})", v.status, v.witness));
    }
    ctx.write_json("audit.json", &labelled(&report), written)
}

fn classify(
    cfg: &RunConfig,
    spec: &NonlinearitySpec,
    ctx: &Context,
    written: &mut Vec<PathBuf>,
) -> Result<(), Failure> {
    let cat = catalog(spec, cfg.p)?;
    ctx.log(format!("{} catalog entries", cat.entries.len()));
    ctx.write_json("classify.json", &cat, written)
}

fn profile(
    cfg: &RunConfig,
    spec: &NonlinearitySpec,
    ctx: &Context,
    written: &mut Vec<PathBuf>,
) -> Result<(), Failure> {
    let cat = catalog(spec, cfg.p)?;
    let samples = cfg.samples.unwrap_or(DEFAULT_SAMPLES);
    let t_max = cfg.t_max.unwrap_or(DEFAULT_T_MAX);
    let chosen: Vec<(usize, _)> = cat
        .entries
        .iter()
        .enumerate()
        .filter(|(_, e)| e.kind != ProfileKind::Trivial)
        .filter(|(_, e)| {
            cfg.rho
                .is_none_or(|r| (e.rho - r).abs() <= 1e-9 * (1.0 + r))
        })
        .collect();
    if chosen.is_empty() {
        return Err(match cfg.rho {
            Some(r) => Failure::Config(format!("no nontrivial catalog entry at rho = {r}")),
            None => Failure::Config("the catalog has no nontrivial entry".into()),
        });
    }
    let mut meta = Vec::new();
    let mut profiles = Vec::new();
    for (index, entry) in chosen {
        ctx.log(format!(
            "entry {index}: {:?} rho = {}",
            entry.kind, entry.rho
        ));
        let prof = build_profile(spec, cfg.p, entry, t_max, samples)?;
        let name = format!("profile_{index}.csv");
        let bytes = csv_bytes(|w| write_profile_csv(w, &profile_rows(&prof)))?;
        ctx.write(&name, &bytes, written)?;
        meta.push(json!({
            "index": index,
            "file": name,
            "entry": entry,
            "t_max": t_max,
            "n": samples,
            "max_first_integral_residual": prof.max_first_integral_residual,
            "max_ode_residual": prof.max_ode_residual,
        }));
        profiles.push((format!("{:?} rho = {}", entry.kind, entry.rho), prof));
    }
    ctx.write_json(
        "profile.json",
        &json!({ "p": cfg.p, "profiles": meta }),
        written,
    )?;
    let series: Vec<Series> = profiles
        .iter()
        .map(|(name, p)| Series {
            name,
            x: &p.t,
            y: &p.u,
        })
        .collect();
    let svg = line_plot(&format!("profiles, p = {}", cfg.p), "t", "u", &series);
    ctx.write("profile.svg", svg.as_bytes(), written)
}

fn ball_scan(
    cfg: &RunConfig,
    spec: &NonlinearitySpec,
    ctx: &Context,
    written: &mut Vec<PathBuf>,
) -> Result<(), Failure> {
    let n = cfg.n.expect("validated");
    let rho = cfg.level(spec)?;
    let eps = cfg.eps.unwrap_or(DEFAULT_EPS);
    let intervals = cfg.intervals.unwrap_or(DEFAULT_INTERVALS);
    let r_list = cfg.r_list.as_deref().expect("validated");
    let scan = ball::sup_norm_scan(
        spec,
        cfg.p,
        n,
        rho,
        eps,
        r_list,
        intervals,
        &ball::default_options(),
    )?;
    for row in &scan.rows {
        ctx.log(format!(
            "r = {}: sup_norm {}, energy {}",
            row.r, row.sup_norm, row.energy
        ));
    }
    let bytes = csv_bytes(|w| write_scan_csv(w, &scan.rows))?;
    ctx.write("scan.csv", &bytes, written)?;
    let hypotheses = match check_thm13(spec, cfg.p, n) {
        Ok(report) => labelled(&report),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let summary = json!({
        "p": cfg.p,
        "N": n,
        "rho": scan.rho,
        "eps": scan.eps,
        "R0": scan.r0,
        "J": intervals,
        "monotone": scan.monotone,
        "hypotheses": hypotheses,
    });
    ctx.write_json("ball.json", &summary, written)
}

fn strip_solve(
    cfg: &RunConfig,
    spec: &NonlinearitySpec,
    ctx: &Context,
    written: &mut Vec<PathBuf>,
) -> Result<(), Failure> {
    let rho = cfg.level(spec)?;
    let geom = StripGeometry {
        width: cfg.width.expect("validated"),
        height: cfg.height.expect("validated"),
        nx: cfg.nx.expect("validated"),
        ny: cfg.ny.expect("validated"),
    };
    let init = match cfg.init.unwrap_or(InitKind::Perturbed) {
        InitKind::Perturbed => Init::PerturbedProfile { shift: 0 },
        InitKind::Zero => Init::Zero,
        InitKind::Random => Init::Random { seed: ctx.seed },
    };
    let sol = solve_strip(spec, cfg.p, rho, geom, &init, &strip::default_options())?;
    ctx.log(format!(
        "{} iterations, symmetry deviation {}, profile mismatch {}",
        sol.iterations, sol.symmetry_deviation, sol.profile_mismatch
    ));
    let bytes = csv_bytes(|w| write_field_csv(w, &field_rows(&sol)))?;
    ctx.write("field.csv", &bytes, written)?;
    let summary = json!({
        "p": cfg.p,
        "rho": sol.rho,
        "W": sol.width,
        "H": sol.height,
        "nx": sol.nx,
        "ny": sol.ny,
        "init": init_label(&init),
        "top_value": sol.top_value,
        "energy": sol.energy,
        "iterations": sol.iterations,
        "symmetry_deviation": sol.symmetry_deviation,
        "profile_mismatch": sol.profile_mismatch,
        "max_vertical_drop": sol.max_vertical_drop(),
    });
    ctx.write_json("strip.json", &summary, written)?;
    let y: Vec<f64> = (0..geom.ny).map(|j| geom.y(j)).collect();
    let (means, osc) = (sol.row_means(), sol.row_oscillations());
    let svg = line_plot(
        &format!("strip rows, p = {}", cfg.p),
        "y",
        "u",
        &[
            Series {
                name: "row mean",
                x: &y,
                y: &means,
            },
            Series {
                name: "row oscillation",
                x: &y,
                y: &osc,
            },
        ],
    );
    ctx.write("strip.svg", svg.as_bytes(), written)
}

fn init_label(init: &Init) -> serde_json::Value {
    match init {
        Init::PerturbedProfile { shift } => json!({ "kind": "perturbed", "shift": shift }),
        Init::Random { seed } => json!({ "kind": "random", "seed": seed }),
        Init::Zero => json!({ "kind": "zero" }),
        Init::Field { .. } => json!({ "kind": "field" }),
    }
}
