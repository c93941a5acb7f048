//! Report assembly and CSV export.
//!
//! JSON reports use 17-significant-digit floats and stable key order; CSV
//! cells use the shortest round-trip representation. Reports embed the
//! toolkit version and a hash of the resolved configuration, and contain no
//! wall-clock data, so identical configs produce byte-identical files.

use std::fmt::Write as _;

use warpgeom::conditions::CheckReport;
use warpgeom::grid::ChartGrid;

use crate::jsonout::{fnv1a64, from_serde, Json};

pub fn base_report(command: &str, resolved: &serde_json::Value) -> Json {
    let config = from_serde(resolved);
    let hash = fnv1a64(config.render().as_bytes());
    let mut root = Json::obj();
    root.push("tool", Json::str("warpgeom"));
    root.push("version", Json::str(env!("CARGO_PKG_VERSION")));
    root.push("command", Json::str(command));
    root.push("config_hash", Json::str(format!("{hash:016x}")));
    root.push("config", config);
    root
}

pub fn check_json(rep: &CheckReport, grid: &ChartGrid, gate: f64, pass: bool) -> Json {
    let mut j = Json::obj();
    j.push("name", Json::str(rep.name));
    j.push("fd_based", Json::Bool(rep.fd_based));
    j.push("max_abs", Json::num(rep.max_abs));
    j.push("mean_abs", Json::num(rep.mean_abs));
    j.push(
        "argmax",
        Json::Arr(
            grid.multi(rep.argmax)
                .into_iter()
                .map(|i| Json::Int(i as i64))
                .collect(),
        ),
    );
    j.push(
        "argmax_coords",
        Json::Arr(grid.coords(rep.argmax).into_iter().map(Json::num).collect()),
    );
    if let Some((name, value)) = rep.secondary {
        j.push(name, Json::num(value));
    }
    j.push("gate", Json::num(gate));
    j.push("pass", Json::Bool(pass));
    j
}

pub fn grid_json(grid: &ChartGrid) -> Json {
    let mut j = Json::obj();
    let mut axes = Vec::new();
    for ax in grid.axes() {
        let mut a = Json::obj();
        a.push("min", Json::num(ax.min));
        a.push("max", Json::num(ax.max));
        a.push("count", Json::Int(ax.count as i64));
        a.push("spacing", Json::num(ax.spacing()));
        axes.push(a);
    }
    j.push("axes", Json::Arr(axes));
    j.push("nodes", Json::Int(grid.len() as i64));
    j
}

/// CSV with the fixed column order: node indices, coordinates, then the
/// named per-node fields.
pub fn node_csv(grid: &ChartGrid, fields: &[(&str, &dyn Fn(usize) -> Option<f64>)]) -> String {
    let dim = grid.dim();
    let mut out = String::new();
    for d in 0..dim {
        let _ = write!(out, "i{d},");
    }
    for d in 0..dim {
        let _ = write!(out, "x{d},");
    }
    let names: Vec<&str> = fields.iter().map(|(n, _)| *n).collect();
    out.push_str(&names.join(","));
    out.push('\n');
    for node in grid.nodes() {
        let multi = grid.multi(node);
        for i in &multi {
            let _ = write!(out, "{i},");
        }
        for d in 0..dim {
            let _ = write!(out, "{},", grid.coord(node, d));
        }
        let cells: Vec<String> = fields
            .iter()
            .map(|(_, f)| match f(node) {
                Some(x) if x.is_finite() => format!("{x}"),
                _ => "masked".to_string(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
