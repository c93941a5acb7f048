//! Command-line driver: structure-condition verification, flatness,
//! reconstruction, horizon scanning, and convergence tables over the
//! built-in scenarios or user-supplied configurations.
//!
//! Exit codes: 0 pass, 1 usage/config error, 2 verification failure.

mod config;
mod jsonout;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use warpgeom::conditions::{box_max, run_all};
use warpgeom::frames::{
    build_connection_forms, effective_gate, flatness_residual, GatePolicy,
};
use warpgeom::linalg::SqMat;
use warpgeom::reconstruct::{
    build_chi, initial_frame, integrate_field, leaf_structure, verify_immersion, FrameElement,
    IntegrateOptions, LeafStructure,
};

use config::{Config, ConfigError, Tolerances};
use jsonout::Json;
use report::{base_report, check_json, grid_json, node_csv};

#[derive(Parser)]
#[command(
    name = "warpgeom",
    version,
    about = "verification and reconstruction of hypersurfaces in semi-Riemannian warped products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// built-in scenario name (example1 | example2 | slice)
    #[arg(long, conflicts_with = "config")]
    scenario: Option<String>,
    /// JSON configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// dotted-path overrides applied after scenario expansion (key=value)
    #[arg(long = "override", value_name = "K=V")]
    overrides: Vec<String>,
    /// output directory for report.json and CSV exports
    #[arg(long)]
    out: Option<PathBuf>,
    /// fail instead of warn when the structure gate trips
    #[arg(long)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the structure-condition checks
    Verify(CommonArgs),
    /// Assemble Ω, 𝐗, Υ and report the flatness residual of Υ
    Flatness(CommonArgs),
    /// Integrate the frame equation and rebuild the immersion
    Reconstruct {
        #[command(flatten)]
        common: CommonArgs,
        /// initial frame: auto (Gram-Schmidt completion) | paper (the
        /// scenario's closed-form frame field) | FILE with (n+2)² numbers
        #[arg(long, default_value = "auto")]
        b0: String,
        /// origin node as comma-separated indices (default: grid center)
        #[arg(long)]
        origin: Option<String>,
    },
    /// Scan π-leaves for null mean curvature (RW charts, n = 3)
    Horizon(CommonArgs),
    /// Residual convergence orders across grid resolutions
    Convergence {
        #[command(flatten)]
        common: CommonArgs,
        /// comma-separated per-axis node counts
        #[arg(long, default_value = "50,100,200")]
        resolutions: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(c) => with_config(c, cmd_verify),
        Command::Flatness(c) => with_config(c, cmd_flatness),
        Command::Reconstruct { common, b0, origin } => with_config(common, |cfg, common| {
            cmd_reconstruct(cfg, common, b0, origin.as_deref())
        }),
        Command::Horizon(c) => with_config(c, cmd_horizon),
        Command::Convergence {
            common,
            resolutions,
        } => cmd_convergence(common, resolutions),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}

enum CliError {
    Config(ConfigError),
    Usage(String),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn load_document(common: &CommonArgs) -> Result<serde_json::Value, CliError> {
    let mut doc = match (&common.scenario, &common.config) {
        (Some(name), None) => config::scenario_value(name)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| {
                CliError::Usage(format!(
                    "malformed JSON in {}: {e}",
                    path.display()
                ))
            })?
        }
        _ => {
            return Err(CliError::Usage(
                "give exactly one of --scenario NAME or --config FILE".into(),
            ))
        }
    };
    config::apply_overrides(&mut doc, &common.overrides)?;
    if common.strict {
        config::apply_overrides(&mut doc, &["flags.strict=true".to_string()])?;
    }
    Ok(doc)
}

fn with_config(
    common: &CommonArgs,
    f: impl FnOnce(Config, &CommonArgs) -> Result<ExitCode, CliError>,
) -> Result<ExitCode, CliError> {
    let mut doc = load_document(common)?;
    let a_scale = config::extract_a_scale(&mut doc)?;
    let mut cfg = config::build(&doc)?;
    cfg.a_scale = a_scale;
    if a_scale != 1.0 {
        for v in cfg.scenario.data.shape.data.iter_mut() {
            *v *= a_scale;
        }
        // perturbed data no longer matches the closed forms
        cfg.scenario.oracle = None;
    }
    f(cfg, common)
}

fn emit(report: &Json, common: &CommonArgs, extra: &[(&str, String)]) -> Result<(), CliError> {
    let rendered = report.render();
    match &common.out {
        None => print!("{rendered}"),
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join("report.json"), rendered)?;
            for (name, body) in extra {
                std::fs::write(dir.join(name), body)?;
            }
        }
    }
    Ok(())
}

fn gate_for(rep: &warpgeom::conditions::CheckReport, tol: &Tolerances, grid: &warpgeom::grid::ChartGrid) -> f64 {
    if rep.fd_based {
        effective_gate(tol.tau_struct, grid)
    } else {
        tol.tau_analytic
    }
}

fn cmd_verify(cfg: Config, common: &CommonArgs) -> Result<ExitCode, CliError> {
    let data = &cfg.scenario.data;
    let reports = run_all(data).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut all_pass = true;
    let mut checks = Vec::new();
    for rep in &reports {
        let gate = gate_for(rep, &cfg.tolerances, &data.grid);
        let pass = rep.max_abs <= gate;
        all_pass &= pass;
        checks.push(check_json(rep, &data.grid, gate, pass));
    }
    let mut root = base_report("verify", &cfg.resolved);
    root.push("scenario", Json::str(cfg.scenario.name));
    root.push("grid", grid_json(&data.grid));
    root.push("checks", Json::Arr(checks));
    root.push("status", Json::str(if all_pass { "pass" } else { "fail" }));

    let columns: Vec<(&str, Box<dyn Fn(usize) -> Option<f64>>)> = reports
        .iter()
        .map(|r| {
            let field = &r.field;
            (
                r.name,
                Box::new(move |node: usize| Some(field[node])) as Box<dyn Fn(usize) -> Option<f64>>,
            )
        })
        .collect();
    let borrowed: Vec<(&str, &dyn Fn(usize) -> Option<f64>)> = columns
        .iter()
        .map(|(n, f)| (*n, f.as_ref() as &dyn Fn(usize) -> Option<f64>))
        .collect();
    let csv = node_csv(&data.grid, &borrowed);
    emit(&root, common, &[("residuals.csv", csv)])?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn gate_policy(cfg: &Config) -> GatePolicy {
    if cfg.flags.strict {
        GatePolicy::Strict {
            tau_struct: cfg.tolerances.tau_struct,
        }
    } else {
        GatePolicy::Warn {
            tau_struct: cfg.tolerances.tau_struct,
        }
    }
}

fn cmd_flatness(cfg: Config, common: &CommonArgs) -> Result<ExitCode, CliError> {
    let data = &cfg.scenario.data;
    let out = match build_connection_forms(data, gate_policy(&cfg)) {
        Ok(out) => out,
        Err(warpgeom::Error::StructureGate { check, residual, gate }) => {
            eprintln!("structure gate tripped on `{check}`: {residual:.3e} > {gate:.3e}");
            return Ok(ExitCode::from(2));
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let flat =
        flatness_residual(&data.grid, &out.bundle).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut root = base_report("flatness", &cfg.resolved);
    root.push("scenario", Json::str(cfg.scenario.name));
    root.push("grid", grid_json(&data.grid));
    let mut f = Json::obj();
    f.push("max_abs", Json::num(flat.max_abs));
    f.push("mean_abs", Json::num(flat.mean_abs));
    f.push(
        "argmax",
        Json::Arr(
            data.grid
                .multi(flat.argmax)
                .into_iter()
                .map(|i| Json::Int(i as i64))
                .collect(),
        ),
    );
    f.push("cartan_first_max", Json::num(flat.cartan_first_max));
    root.push("flatness", f);
    if !out.warnings.is_empty() {
        root.push(
            "warnings",
            Json::Arr(out.warnings.iter().map(Json::str).collect()),
        );
    }
    // per-entry breakdown at the argmax node
    let mut entries = Vec::new();
    let m = out.bundle.upsilon.m;
    for d in 0..data.grid.dim() {
        for a in 0..m {
            for b in 0..m {
                let v = out.bundle.upsilon.at(flat.argmax, d, a, b);
                if v != 0.0 {
                    let mut e = Json::obj();
                    e.push("direction", Json::Int(d as i64));
                    e.push("row", Json::Int(a as i64));
                    e.push("col", Json::Int(b as i64));
                    e.push("value", Json::num(v));
                    entries.push(e);
                }
            }
        }
    }
    root.push("upsilon_at_argmax", Json::Arr(entries));
    root.push("status", Json::str("pass"));
    let csv = node_csv(
        &data.grid,
        &[("flatness", &|node| Some(flat.field[node]))],
    );
    emit(&root, common, &[("flatness.csv", csv)])?;
    Ok(ExitCode::SUCCESS)
}

fn parse_origin(data: &warpgeom::surface::HypersurfaceData, origin: Option<&str>) -> Result<usize, CliError> {
    match origin {
        None => {
            let mid: Vec<usize> = data.grid.axes().iter().map(|a| a.count / 2).collect();
            Ok(data.grid.index(&mid))
        }
        Some(text) => {
            let parts: Result<Vec<usize>, _> =
                text.split(',').map(|p| p.trim().parse::<usize>()).collect();
            let parts = parts.map_err(|_| {
                CliError::Usage(format!("origin `{text}` is not a comma-separated index list"))
            })?;
            if parts.len() != data.grid.dim() {
                return Err(CliError::Usage(format!(
                    "origin needs {} indices",
                    data.grid.dim()
                )));
            }
            for (d, (i, ax)) in parts.iter().zip(data.grid.axes()).enumerate() {
                if *i >= ax.count {
                    return Err(CliError::Usage(format!(
                        "origin index {i} out of range on axis {d}"
                    )));
                }
            }
            Ok(data.grid.index(&parts))
        }
    }
}

fn initial_from(
    cfg: &Config,
    b0: &str,
    origin: usize,
) -> Result<FrameElement, CliError> {
    let data = &cfg.scenario.data;
    match b0 {
        "auto" => initial_frame(data, origin).map_err(|e| CliError::Usage(e.to_string())),
        "paper" => {
            let oracle = cfg.scenario.oracle.as_ref().ok_or_else(|| {
                CliError::Usage(
                    "this configuration has no closed-form frame field (--b0 paper needs a built-in worked scenario)"
                        .into(),
                )
            })?;
            let m = data.m();
            Ok(FrameElement {
                b: SqMat {
                    n: m,
                    a: oracle.b[origin * m * m..(origin + 1) * m * m].to_vec(),
                },
            })
        }
        path => {
            let text = std::fs::read_to_string(Path::new(path))?;
            let nums: Result<Vec<f64>, _> = text
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<f64>())
                .collect();
            let nums = nums
                .map_err(|_| CliError::Usage(format!("could not parse matrix from {path}")))?;
            let m = data.m();
            if nums.len() != m * m {
                return Err(CliError::Usage(format!(
                    "initial frame needs {} numbers, found {}",
                    m * m,
                    nums.len()
                )));
            }
            let b = SqMat { n: m, a: nums };
            // validate membership in Z(x₀): group + pinned T-row
            let g = data.signs.g_amb();
            if b.group_residual(g) > 1e-8 {
                return Err(CliError::Usage(format!(
                    "initial frame is not in the group: ‖BᵀGB − G‖ = {:.3e}",
                    b.group_residual(g)
                )));
            }
            let n = data.n();
            let mut worst = (b.at(m - 1, 0)).abs();
            for k in 0..n {
                worst = worst.max((b.at(m - 1, 1 + k) - data.t_frame[origin * n + k]).abs());
            }
            worst = worst.max((b.at(m - 1, m - 1) - data.t_normal[origin]).abs());
            if worst > 1e-8 {
                return Err(CliError::Usage(format!(
                    "initial frame row n+1 must equal (T_0,…,T_{{n+1}}) at the origin (off by {worst:.3e})"
                )));
            }
            Ok(FrameElement { b })
        }
    }
}

fn cmd_reconstruct(
    cfg: Config,
    common: &CommonArgs,
    b0: &str,
    origin: Option<&str>,
) -> Result<ExitCode, CliError> {
    let data = &cfg.scenario.data;
    let out = match build_connection_forms(data, gate_policy(&cfg)) {
        Ok(out) => out,
        Err(warpgeom::Error::StructureGate { check, residual, gate }) => {
            eprintln!("structure gate tripped on `{check}`: {residual:.3e} > {gate:.3e}");
            return Ok(ExitCode::from(2));
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let origin = parse_origin(data, origin)?;
    let b0 = initial_from(&cfg, b0, origin)?;
    let opts = IntegrateOptions {
        projection_interval: cfg.flags.projection_interval,
        drift_limit: 1e-3,
    };
    let field = integrate_field(&data.grid, &out.bundle, data, &b0, origin, opts)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let sample = match build_chi(data, &field.b, cfg.tolerances.tau_quad) {
        Ok(s) => s,
        Err(warpgeom::Error::QuadricViolation { residual, tol }) => {
            eprintln!("quadric membership violated: {residual:.3e} > {tol:.3e}");
            return Ok(ExitCode::from(2));
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let rep = verify_immersion(data, &sample).map_err(|e| CliError::Usage(e.to_string()))?;
    let leaves = leaf_structure(data, cfg.tolerances.tau_deg);

    let drift_pass = field.stats.max_pre_projection <= cfg.tolerances.tau_grp.max(1e-12);
    let mut root = base_report("reconstruct", &cfg.resolved);
    root.push("scenario", Json::str(cfg.scenario.name));
    root.push("grid", grid_json(&data.grid));
    root.push(
        "origin",
        Json::Arr(
            data.grid
                .multi(origin)
                .into_iter()
                .map(|i| Json::Int(i as i64))
                .collect(),
        ),
    );
    let mut r = Json::obj();
    r.push("quadric_max", Json::num(sample.quadric_max));
    r.push("isometry_max", Json::num(rep.isometry_max));
    r.push("dt_decomposition_max", Json::num(rep.dt_decomposition_max));
    r.push("shape_recovery_max", Json::num(rep.shape_recovery_max));
    r.push(
        "group_drift_pre_projection",
        Json::num(field.stats.max_pre_projection),
    );
    r.push("projections", Json::Int(field.stats.projections as i64));
    r.push("edges", Json::Int(field.stats.edges as i64));
    root.push("reconstruction", r);
    root.push(
        "leaf_structure",
        Json::str(match &leaves {
            LeafStructure::Slice => "slice",
            LeafStructure::Foliated { .. } => "foliated",
            LeafStructure::Mixed { .. } => "mixed",
        }),
    );
    if !out.warnings.is_empty() {
        root.push(
            "warnings",
            Json::Arr(out.warnings.iter().map(Json::str).collect()),
        );
    }
    let pass = drift_pass;
    root.push("status", Json::str(if pass { "pass" } else { "fail" }));

    // χ CSV: indices, coords, chi components, normal components
    let m = data.m();
    let mut fields: Vec<(String, Box<dyn Fn(usize) -> Option<f64>>)> = Vec::new();
    for alpha in 0..m {
        let chi = sample.chi.clone();
        fields.push((
            format!("chi_{alpha}"),
            Box::new(move |node| Some(chi[node * m + alpha])),
        ));
    }
    for alpha in 0..m {
        let normal = sample.normal.clone();
        fields.push((
            format!("normal_{alpha}"),
            Box::new(move |node| Some(normal[node * m + alpha])),
        ));
    }
    {
        let iso = rep.isometry_field.clone();
        fields.push((
            "isometry_residual".to_string(),
            Box::new(move |node| Some(iso[node])),
        ));
    }
    let borrowed: Vec<(&str, &dyn Fn(usize) -> Option<f64>)> = fields
        .iter()
        .map(|(n, f)| (n.as_str(), f.as_ref() as &dyn Fn(usize) -> Option<f64>))
        .collect();
    let csv = node_csv(&data.grid, &borrowed);
    emit(&root, common, &[("chi.csv", csv)])?;
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_horizon(cfg: Config, common: &CommonArgs) -> Result<ExitCode, CliError> {
    let data = &cfg.scenario.data;
    let scan = warpgeom::horizons::trapped_scan(data, cfg.tolerances.tau_trap, cfg.tolerances.tau_deg)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut root = base_report("horizon", &cfg.resolved);
    root.push("scenario", Json::str(cfg.scenario.name));
    root.push("grid", grid_json(&data.grid));
    root.push("tau_trap", Json::num(scan.tau_trap));
    let mut leaves = Vec::new();
    for leaf in &scan.leaves {
        let mut l = Json::obj();
        l.push("leaf", Json::Int(leaf.leaf as i64));
        l.push("t", Json::num(leaf.t));
        l.push("nodes", Json::Int(leaf.nodes as i64));
        l.push("trapped", Json::Bool(leaf.trapped));
        l.push("indeterminate", Json::Bool(leaf.indeterminate));
        l.push("max_abs_h_sq", Json::num(leaf.max_abs_h_sq));
        leaves.push(l);
    }
    root.push("leaves", Json::Arr(leaves));
    root.push("status", Json::str("pass"));

    let points = scan.points.clone();
    let pts2 = points.clone();
    let pts3 = points.clone();
    let pts4 = points.clone();
    let pts5 = points.clone();
    let pi = data.pi.clone();
    let csv = node_csv(
        &data.grid,
        &[
            ("pi", &move |node| Some(pi[node])),
            ("h", &move |node| {
                let p = &points[node];
                if p.masked {
                    None
                } else {
                    Some(p.h)
                }
            }),
            ("h_sq", &move |node| {
                let p = &pts2[node];
                if p.masked {
                    None
                } else {
                    Some(p.h_sq)
                }
            }),
            ("trapped", &move |node| {
                Some(if pts3[node].trapped { 1.0 } else { 0.0 })
            }),
            ("branch", &move |node| Some(pts4[node].branch as f64)),
            ("masked", &move |node| {
                Some(if pts5[node].masked { 1.0 } else { 0.0 })
            }),
        ],
    );
    emit(&root, common, &[("leaves.csv", csv)])?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_convergence(common: &CommonArgs, resolutions: &str) -> Result<ExitCode, CliError> {
    let counts: Result<Vec<usize>, _> = resolutions
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect();
    let counts =
        counts.map_err(|_| CliError::Usage(format!("bad resolutions list `{resolutions}`")))?;
    if counts.len() < 2 {
        return Err(CliError::Usage(
            "convergence needs at least two resolutions".into(),
        ));
    }
    // run the checks at every resolution, measuring on the fixed central box
    let mut names: Vec<String> = Vec::new();
    let mut table: Vec<Vec<f64>> = Vec::new(); // [resolution][check]
    let mut resolved = None;
    let mut scenario_name = "";
    for (ri, &nodes) in counts.iter().enumerate() {
        let mut doc = load_document(common)?;
        config::apply_overrides(&mut doc, &[format!("scenario.nodes={nodes}")])
            .map_err(CliError::Config)?;
        let a_scale = config::extract_a_scale(&mut doc)?;
        let mut cfg = config::build(&doc)?;
        if a_scale != 1.0 {
            for v in cfg.scenario.data.shape.data.iter_mut() {
                *v *= a_scale;
            }
        }
        scenario_name = cfg.scenario.name;
        let data = &cfg.scenario.data;
        let reports = run_all(data).map_err(|e| CliError::Usage(e.to_string()))?;
        let mut row = Vec::new();
        for rep in reports.iter().filter(|r| r.fd_based) {
            if ri == 0 {
                names.push(rep.name.to_string());
            }
            row.push(box_max(&data.grid, &rep.field, 0.15));
        }
        // flatness of the assembled Υ as the final column
        let out = build_connection_forms(data, GatePolicy::Skip)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let flat = flatness_residual(&data.grid, &out.bundle)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        if ri == 0 {
            names.push("flatness".to_string());
        }
        row.push(box_max(&data.grid, &flat.field, 0.15));
        if ri == 0 {
            resolved = Some(cfg.resolved.clone());
        }
        table.push(row);
    }
    let resolved = resolved.unwrap();
    let mut root = base_report("convergence", &resolved);
    root.push("scenario", Json::str(scenario_name));
    root.push(
        "resolutions",
        Json::Arr(counts.iter().map(|&c| Json::Int(c as i64)).collect()),
    );
    let mut rows = Vec::new();
    for (ci, name) in names.iter().enumerate() {
        let mut row = Json::obj();
        row.push("check", Json::str(name.clone()));
        row.push(
            "residuals",
            Json::Arr(table.iter().map(|r| Json::num(r[ci])).collect()),
        );
        let mut orders = Vec::new();
        for w in 0..counts.len() - 1 {
            let coarse = table[w][ci];
            let fine = table[w + 1][ci];
            // spacing ratio between consecutive resolutions; residuals at
            // the rounding floor have no meaningful order and are masked
            let hratio = (counts[w + 1] as f64 - 1.0) / (counts[w] as f64 - 1.0);
            let order = if fine > 1e-12 && coarse > 1e-12 {
                (coarse / fine).ln() / hratio.ln()
            } else {
                f64::NAN
            };
            orders.push(Json::num(order));
        }
        row.push("orders", Json::Arr(orders));
        rows.push(row);
    }
    root.push("table", Json::Arr(rows));
    root.push("status", Json::str("pass"));
    emit(&root, common, &[])?;
    Ok(ExitCode::SUCCESS)
}
