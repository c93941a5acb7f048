//! Configuration ingestion: JSON schema walking with JSON-pointer error
//! paths, dotted-path overrides, and scenario/field construction.

use serde_json::Value;
use warpgeom::ambient::SignatureData;
use warpgeom::calculus::MetricField;
use warpgeom::grid::{Axis, ChartGrid};
use warpgeom::scenarios::{self, Fiber, Scenario};
use warpgeom::surface::{
    AnalyticDerivs, FrameField, FrameMatrixField, HypersurfaceData, RhoFields,
};
use warpgeom::{Expr, ScalarField1D};

#[derive(Debug)]
pub struct ConfigError {
    /// JSON pointer to the offending key
    pub pointer: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error at `{}`: {}", self.pointer, self.message)
    }
}

fn err<T>(pointer: &str, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        pointer: pointer.to_string(),
        message: message.into(),
    })
}

#[derive(Clone, Debug)]
pub struct Tolerances {
    pub tau_struct: f64,
    pub tau_analytic: f64,
    pub tau_grp: f64,
    pub tau_quad: f64,
    pub tau_trap: f64,
    pub tau_deg: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tau_struct: warpgeom::frames::DEFAULT_TAU_STRUCT,
            tau_analytic: 1e-10,
            tau_grp: 1e-8,
            tau_quad: 1e-6,
            tau_trap: 1e-6,
            tau_deg: 1e-8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Flags {
    pub strict: bool,
    pub projection_interval: usize,
}

impl Default for Flags {
    fn default() -> Self {
        Flags {
            strict: false,
            projection_interval: 16,
        }
    }
}

/// A validated configuration, plus the resolved JSON it came from (embedded
/// into every report for reproducibility).
pub struct Config {
    pub scenario: Scenario,
    pub tolerances: Tolerances,
    pub flags: Flags,
    /// perturbation knob applied after scenario expansion
    pub a_scale: f64,
    pub resolved: Value,
}

/// Default config document for a named built-in scenario.
pub fn scenario_value(name: &str) -> Result<Value, ConfigError> {
    let body = match name {
        "example1" => serde_json::json!({ "scenario": { "name": "example1" } }),
        "example2" => serde_json::json!({ "scenario": { "name": "example2" } }),
        "slice" => serde_json::json!({ "scenario": { "name": "slice" } }),
        other => return err("/scenario/name", format!("unknown scenario `{other}`")),
    };
    Ok(body)
}

/// Apply `key=value` overrides. Dotted paths index into the JSON document
/// (creating objects along the way); the special key `A_scale` scales the
/// shape operator after scenario expansion.
pub fn apply_overrides(doc: &mut Value, overrides: &[String]) -> Result<(), ConfigError> {
    for item in overrides {
        let Some((path, raw)) = item.split_once('=') else {
            return err("/", format!("override `{item}` is not of the form key=value"));
        };
        let value: Value = match serde_json::from_str(raw) {
            Ok(v) => v,
            Err(_) => Value::String(raw.to_string()),
        };
        let parts: Vec<&str> = path.split('.').collect();
        set_path(doc, &parts, value, path)?;
    }
    Ok(())
}

fn set_path(v: &mut Value, parts: &[&str], value: Value, full: &str) -> Result<(), ConfigError> {
    let (head, rest) = parts.split_first().expect("non-empty override path");
    if let Ok(idx) = head.parse::<usize>() {
        let arr = v.as_array_mut().ok_or(ConfigError {
            pointer: format!("/{}", full.replace('.', "/")),
            message: format!("`{head}` indexes into a non-array"),
        })?;
        if idx >= arr.len() {
            return err(
                &format!("/{}", full.replace('.', "/")),
                "array index out of bounds",
            );
        }
        if rest.is_empty() {
            arr[idx] = value;
            Ok(())
        } else {
            set_path(&mut arr[idx], rest, value, full)
        }
    } else {
        let map = v.as_object_mut().ok_or(ConfigError {
            pointer: format!("/{}", full.replace('.', "/")),
            message: "path walks into a non-object".into(),
        })?;
        if rest.is_empty() {
            map.insert(head.to_string(), value);
            Ok(())
        } else {
            let slot = map
                .entry(head.to_string())
                .or_insert_with(|| Value::Object(Default::default()));
            set_path(slot, rest, value, full)
        }
    }
}

fn get_f64(v: &Value, ptr: &str) -> Result<f64, ConfigError> {
    v.as_f64().ok_or(ConfigError {
        pointer: ptr.into(),
        message: "expected a number".into(),
    })
}

fn get_str<'a>(v: &'a Value, ptr: &str) -> Result<&'a str, ConfigError> {
    v.as_str().ok_or(ConfigError {
        pointer: ptr.into(),
        message: "expected a string".into(),
    })
}

fn known_keys(v: &Value, ptr: &str, allowed: &[&str]) -> Result<(), ConfigError> {
    if let Some(map) = v.as_object() {
        for key in map.keys() {
            if !allowed.contains(&key.as_str()) {
                return err(
                    &format!("{ptr}/{key}"),
                    format!("unknown key (expected one of: {})", allowed.join(", ")),
                );
            }
        }
    }
    Ok(())
}

pub fn build(doc: &Value) -> Result<Config, ConfigError> {
    if !doc.is_object() {
        return err("/", "config root must be an object");
    }
    known_keys(
        doc,
        "",
        &[
            "scenario",
            "fields",
            "signs",
            "warp",
            "grid",
            "tolerances",
            "flags",
        ],
    )?;

    let tolerances = parse_tolerances(doc.get("tolerances"))?;
    let flags = parse_flags(doc.get("flags"))?;
    let grid = match doc.get("grid") {
        Some(g) => Some(parse_grid(g)?),
        None => None,
    };

    let scenario = match (doc.get("scenario"), doc.get("fields")) {
        (Some(_), Some(_)) => {
            return err("/fields", "give either `scenario` or `fields`, not both")
        }
        (Some(sc), None) => build_scenario(sc, grid)?,
        (None, Some(fields)) => build_fields(doc, fields, grid)?,
        (None, None) => return err("/", "config needs a `scenario` or a `fields` section"),
    };

    Ok(Config {
        scenario,
        tolerances,
        flags,
        a_scale: 1.0,
        resolved: doc.clone(),
    })
}

fn parse_tolerances(v: Option<&Value>) -> Result<Tolerances, ConfigError> {
    let mut t = Tolerances::default();
    let Some(v) = v else { return Ok(t) };
    known_keys(
        v,
        "/tolerances",
        &[
            "tau_struct",
            "tau_analytic",
            "tau_grp",
            "tau_quad",
            "tau_trap",
            "tau_deg",
        ],
    )?;
    for (key, slot) in [
        ("tau_struct", &mut t.tau_struct),
        ("tau_analytic", &mut t.tau_analytic),
        ("tau_grp", &mut t.tau_grp),
        ("tau_quad", &mut t.tau_quad),
        ("tau_trap", &mut t.tau_trap),
        ("tau_deg", &mut t.tau_deg),
    ] {
        if let Some(x) = v.get(key) {
            let val = get_f64(x, &format!("/tolerances/{key}"))?;
            if !(val > 0.0) {
                return err(&format!("/tolerances/{key}"), "must be positive");
            }
            *slot = val;
        }
    }
    Ok(t)
}

fn parse_flags(v: Option<&Value>) -> Result<Flags, ConfigError> {
    let mut f = Flags::default();
    let Some(v) = v else { return Ok(f) };
    known_keys(v, "/flags", &["strict", "projection_interval"])?;
    if let Some(s) = v.get("strict") {
        f.strict = s.as_bool().ok_or(ConfigError {
            pointer: "/flags/strict".into(),
            message: "expected a boolean".into(),
        })?;
    }
    if let Some(p) = v.get("projection_interval") {
        let val = p.as_u64().ok_or(ConfigError {
            pointer: "/flags/projection_interval".into(),
            message: "expected a positive integer".into(),
        })?;
        if val == 0 {
            return err("/flags/projection_interval", "must be at least 1");
        }
        f.projection_interval = val as usize;
    }
    Ok(f)
}

fn parse_grid(v: &Value) -> Result<ChartGrid, ConfigError> {
    known_keys(v, "/grid", &["axes"])?;
    let axes = v
        .get("axes")
        .and_then(|a| a.as_array())
        .ok_or(ConfigError {
            pointer: "/grid/axes".into(),
            message: "expected an array of axes".into(),
        })?;
    let mut out = Vec::new();
    for (i, ax) in axes.iter().enumerate() {
        let ptr = format!("/grid/axes/{i}");
        known_keys(ax, &ptr, &["min", "max", "count"])?;
        let min = get_f64(
            ax.get("min").ok_or(ConfigError {
                pointer: format!("{ptr}/min"),
                message: "missing".into(),
            })?,
            &format!("{ptr}/min"),
        )?;
        let max = get_f64(
            ax.get("max").ok_or(ConfigError {
                pointer: format!("{ptr}/max"),
                message: "missing".into(),
            })?,
            &format!("{ptr}/max"),
        )?;
        let count = ax
            .get("count")
            .and_then(|c| c.as_u64())
            .ok_or(ConfigError {
                pointer: format!("{ptr}/count"),
                message: "expected a positive integer".into(),
            })? as usize;
        out.push(Axis::new(min, max, count));
    }
    ChartGrid::new(out).map_err(|e| ConfigError {
        pointer: "/grid/axes".into(),
        message: e.to_string(),
    })
}

fn build_scenario(v: &Value, grid: Option<ChartGrid>) -> Result<Scenario, ConfigError> {
    known_keys(
        v,
        "/scenario",
        &["name", "nodes", "h", "a", "c_const", "t0", "fiber", "t_normal_sign"],
    )?;
    let name = get_str(
        v.get("name").ok_or(ConfigError {
            pointer: "/scenario/name".into(),
            message: "missing".into(),
        })?,
        "/scenario/name",
    )?;
    let nodes = v
        .get("nodes")
        .map(|n| {
            n.as_u64().ok_or(ConfigError {
                pointer: "/scenario/nodes".into(),
                message: "expected a positive integer".into(),
            })
        })
        .transpose()?
        .map(|n| n as usize)
        .unwrap_or(200);
    let grid = match grid {
        Some(g) => g,
        None => scenarios::default_grid(name, nodes).map_err(|e| ConfigError {
            pointer: "/scenario/name".into(),
            message: e.to_string(),
        })?,
    };
    let map_err = |field: &str| {
        let ptr = format!("/scenario/{field}");
        move |e: warpgeom::Error| ConfigError {
            pointer: ptr.clone(),
            message: e.to_string(),
        }
    };
    match name {
        "example1" => {
            let h_src = v
                .get("h")
                .map(|x| get_str(x, "/scenario/h"))
                .transpose()?
                .unwrap_or("2 + 0.3*sin(u)");
            let h = ScalarField1D::new(h_src, "u", (0.0, std::f64::consts::PI))
                .map_err(map_err("h"))?;
            scenarios::graph_sphere(&h, grid).map_err(map_err("name"))
        }
        "example2" => {
            let a_src = v
                .get("a")
                .map(|x| get_str(x, "/scenario/a"))
                .transpose()?
                .unwrap_or("cosh(t)");
            let h_src = v
                .get("h")
                .map(|x| get_str(x, "/scenario/h"))
                .transpose()?
                .unwrap_or("v");
            let c_const = v
                .get("c_const")
                .map(|x| get_f64(x, "/scenario/c_const"))
                .transpose()?
                .unwrap_or(1.0);
            let a = ScalarField1D::new(a_src, "t", (-6.0, 6.0)).map_err(map_err("a"))?;
            let h = ScalarField1D::new(h_src, "v", (-6.0, 6.0)).map_err(map_err("h"))?;
            scenarios::helicoid(&a, &h, c_const, grid).map_err(map_err("name"))
        }
        "slice" => {
            let a_src = v
                .get("a")
                .map(|x| get_str(x, "/scenario/a"))
                .transpose()?
                .unwrap_or("t");
            let t0 = v
                .get("t0")
                .map(|x| get_f64(x, "/scenario/t0"))
                .transpose()?
                .unwrap_or(2.0);
            let fiber = match v
                .get("fiber")
                .map(|x| get_str(x, "/scenario/fiber"))
                .transpose()?
                .unwrap_or("sphere")
            {
                "sphere" => Fiber::Sphere,
                "hyperbolic" => Fiber::Hyperbolic,
                other => {
                    return err(
                        "/scenario/fiber",
                        format!("unknown fiber `{other}` (sphere|hyperbolic)"),
                    )
                }
            };
            let sign = v
                .get("t_normal_sign")
                .map(|x| get_f64(x, "/scenario/t_normal_sign"))
                .transpose()?
                .unwrap_or(-1.0);
            let a = ScalarField1D::new(a_src, "t", (0.05, 20.0)).map_err(map_err("a"))?;
            scenarios::slice(t0, &a, fiber, sign, grid).map_err(map_err("name"))
        }
        other => err("/scenario/name", format!("unknown scenario `{other}`")),
    }
}

/// Explicit field expressions evaluated on the grid with exact jets: the
/// assembled data carries analytic first derivatives for the metric and
/// frame, so the connection forms downstream are free of FD error.
fn build_fields(
    doc: &Value,
    fields: &Value,
    grid: Option<ChartGrid>,
) -> Result<Scenario, ConfigError> {
    let grid = grid.ok_or(ConfigError {
        pointer: "/grid".into(),
        message: "explicit fields need a grid".into(),
    })?;
    let n = grid.dim();
    known_keys(
        fields,
        "/fields",
        &["vars", "metric", "frame", "shape", "t", "t_np1", "pi", "rho"],
    )?;
    let signs = parse_signs(doc.get("signs"), n)?;
    let warp = parse_warp(doc.get("warp"))?;

    let vars: Vec<String> = fields
        .get("vars")
        .and_then(|v| v.as_array())
        .map(|arr| {
            arr.iter()
                .map(|x| x.as_str().unwrap_or("?").to_string())
                .collect()
        })
        .unwrap_or_else(|| {
            ["u", "v", "w"][..n]
                .iter()
                .map(|s| s.to_string())
                .collect()
        });
    if vars.len() != n {
        return err("/fields/vars", format!("expected {n} variable names"));
    }
    let var_refs: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();

    let parse_matrix = |key: &str| -> Result<Vec<Vec<Expr>>, ConfigError> {
        let ptr = format!("/fields/{key}");
        let rows = fields
            .get(key)
            .and_then(|m| m.as_array())
            .ok_or(ConfigError {
                pointer: ptr.clone(),
                message: format!("expected an {n}x{n} array of expressions"),
            })?;
        if rows.len() != n {
            return err(&ptr, format!("expected {n} rows"));
        }
        let mut out = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let cells = row.as_array().ok_or(ConfigError {
                pointer: format!("{ptr}/{i}"),
                message: "expected an array row".into(),
            })?;
            if cells.len() != n {
                return err(&format!("{ptr}/{i}"), format!("expected {n} entries"));
            }
            let mut row_out = Vec::new();
            for (j, cell) in cells.iter().enumerate() {
                let src = get_str(cell, &format!("{ptr}/{i}/{j}"))?;
                row_out.push(Expr::parse(src, &var_refs).map_err(|e| ConfigError {
                    pointer: format!("{ptr}/{i}/{j}"),
                    message: e.to_string(),
                })?);
            }
            out.push(row_out);
        }
        Ok(out)
    };
    let parse_scalar = |key: &str| -> Result<Expr, ConfigError> {
        let ptr = format!("/fields/{key}");
        let src = get_str(
            fields.get(key).ok_or(ConfigError {
                pointer: ptr.clone(),
                message: "missing".into(),
            })?,
            &ptr,
        )?;
        Expr::parse(src, &var_refs).map_err(|e| ConfigError {
            pointer: ptr,
            message: e.to_string(),
        })
    };

    let metric_x = parse_matrix("metric")?;
    let frame_x = parse_matrix("frame")?;
    let shape_x = parse_matrix("shape")?;
    let t_arr = fields
        .get("t")
        .and_then(|v| v.as_array())
        .ok_or(ConfigError {
            pointer: "/fields/t".into(),
            message: format!("expected {n} expressions"),
        })?;
    if t_arr.len() != n {
        return err("/fields/t", format!("expected {n} expressions"));
    }
    let mut t_x = Vec::new();
    for (i, cell) in t_arr.iter().enumerate() {
        let src = get_str(cell, &format!("/fields/t/{i}"))?;
        t_x.push(Expr::parse(src, &var_refs).map_err(|e| ConfigError {
            pointer: format!("/fields/t/{i}"),
            message: e.to_string(),
        })?);
    }
    let t_np1_x = parse_scalar("t_np1")?;
    let pi_x = parse_scalar("pi")?;
    let rho_x = match fields.get("rho") {
        None => None,
        Some(r) => {
            let arr = r.as_array().ok_or(ConfigError {
                pointer: "/fields/rho".into(),
                message: "expected [rho, rho_tilde, rho_bar] expressions".into(),
            })?;
            if arr.len() != 3 {
                return err("/fields/rho", "expected exactly three expressions");
            }
            let mut out = Vec::new();
            for (i, cell) in arr.iter().enumerate() {
                let src = get_str(cell, &format!("/fields/rho/{i}"))?;
                out.push(Expr::parse(src, &var_refs).map_err(|e| ConfigError {
                    pointer: format!("/fields/rho/{i}"),
                    message: e.to_string(),
                })?);
            }
            Some(out)
        }
    };

    // evaluate everything on the grid
    let mut metric = MetricField::zeros(&grid);
    let mut frame = FrameField::zeros(&grid);
    let mut shape = FrameMatrixField::zeros(&grid);
    let mut t_frame = vec![0.0; grid.len() * n];
    let mut t_normal = vec![0.0; grid.len()];
    let mut pi = vec![0.0; grid.len()];
    let mut metric_d1 = vec![0.0; grid.len() * n * n * n];
    let mut frame_d1 = vec![0.0; grid.len() * n * n * n];
    let mut rho = rho_x.as_ref().map(|_| RhoFields {
        rho: vec![0.0; grid.len()],
        rho_t: vec![0.0; grid.len()],
        rho_b: vec![0.0; grid.len()],
    });
    let eval_err = |ptr: String, e: warpgeom::Error| ConfigError {
        pointer: ptr,
        message: e.to_string(),
    };
    for node in grid.nodes() {
        let at = grid.coords(node);
        for p in 0..n {
            for q in 0..n {
                let gm = metric.at_mut(node);
                gm[p * n + q] = metric_x[p][q]
                    .eval(&at)
                    .map_err(|e| eval_err(format!("/fields/metric/{p}/{q}"), e))?;
                let fm = frame.vector_mut(node, p);
                fm[q] = frame_x[p][q]
                    .eval(&at)
                    .map_err(|e| eval_err(format!("/fields/frame/{p}/{q}"), e))?;
                let am = shape.at_mut(node);
                am[p * n + q] = shape_x[p][q]
                    .eval(&at)
                    .map_err(|e| eval_err(format!("/fields/shape/{p}/{q}"), e))?;
                for d in 0..n {
                    metric_d1[node * n * n * n + (d * n + p) * n + q] = metric_x[p][q]
                        .eval_jet2(&at, d)
                        .map_err(|e| eval_err(format!("/fields/metric/{p}/{q}"), e))?
                        .d1;
                    frame_d1[node * n * n * n + (d * n + p) * n + q] = frame_x[p][q]
                        .eval_jet2(&at, d)
                        .map_err(|e| eval_err(format!("/fields/frame/{p}/{q}"), e))?
                        .d1;
                }
            }
            t_frame[node * n + p] = t_x[p]
                .eval(&at)
                .map_err(|e| eval_err(format!("/fields/t/{p}"), e))?;
        }
        t_normal[node] = t_np1_x
            .eval(&at)
            .map_err(|e| eval_err("/fields/t_np1".into(), e))?;
        pi[node] = pi_x
            .eval(&at)
            .map_err(|e| eval_err("/fields/pi".into(), e))?;
        if let (Some(rx), Some(r)) = (&rho_x, rho.as_mut()) {
            r.rho[node] = rx[0]
                .eval(&at)
                .map_err(|e| eval_err("/fields/rho/0".into(), e))?;
            r.rho_t[node] = rx[1]
                .eval(&at)
                .map_err(|e| eval_err("/fields/rho/1".into(), e))?;
            r.rho_b[node] = rx[2]
                .eval(&at)
                .map_err(|e| eval_err("/fields/rho/2".into(), e))?;
        }
    }
    let data = HypersurfaceData {
        grid,
        signs,
        metric,
        frame,
        shape,
        t_frame,
        t_normal,
        pi,
        warp,
        analytic: Some(AnalyticDerivs {
            metric_d1,
            frame_d1,
        }),
        rho,
    };
    data.validate().map_err(|e| ConfigError {
        pointer: "/fields".into(),
        message: e.to_string(),
    })?;
    Ok(Scenario {
        name: "custom",
        data,
        oracle: None,
    })
}

fn parse_signs(v: Option<&Value>, n: usize) -> Result<SignatureData, ConfigError> {
    let v = v.ok_or(ConfigError {
        pointer: "/signs".into(),
        message: "explicit fields need a `signs` section".into(),
    })?;
    known_keys(
        v,
        "/signs",
        &["epsilon", "c", "epsilon_normal", "n", "k", "tangent_signs"],
    )?;
    let getf = |key: &str| -> Result<f64, ConfigError> {
        get_f64(
            v.get(key).ok_or(ConfigError {
                pointer: format!("/signs/{key}"),
                message: "missing".into(),
            })?,
            &format!("/signs/{key}"),
        )
    };
    let epsilon = getf("epsilon")?;
    let c = getf("c")?;
    let eps_normal = getf("epsilon_normal")?;
    let k = v.get("k").and_then(|x| x.as_u64()).unwrap_or(0) as usize;
    if let Some(nv) = v.get("n") {
        let declared = nv.as_u64().unwrap_or(0) as usize;
        if declared != n {
            return err(
                "/signs/n",
                format!("declared n = {declared} but the grid has dimension {n}"),
            );
        }
    }
    let tangent: Vec<f64> = match v.get("tangent_signs") {
        Some(arr) => arr
            .as_array()
            .ok_or(ConfigError {
                pointer: "/signs/tangent_signs".into(),
                message: "expected an array of ±1".into(),
            })?
            .iter()
            .map(|x| x.as_f64().unwrap_or(0.0))
            .collect(),
        None => vec![1.0; n],
    };
    SignatureData::new(n, k, c, epsilon, &tangent, eps_normal).map_err(|e| ConfigError {
        pointer: "/signs".into(),
        message: e.to_string(),
    })
}

fn parse_warp(v: Option<&Value>) -> Result<ScalarField1D, ConfigError> {
    let v = v.ok_or(ConfigError {
        pointer: "/warp".into(),
        message: "explicit fields need a `warp` section".into(),
    })?;
    known_keys(v, "/warp", &["expr", "var", "domain"])?;
    let expr = get_str(
        v.get("expr").ok_or(ConfigError {
            pointer: "/warp/expr".into(),
            message: "missing".into(),
        })?,
        "/warp/expr",
    )?;
    let var = v.get("var").and_then(|x| x.as_str()).unwrap_or("t");
    let domain = v
        .get("domain")
        .and_then(|d| d.as_array())
        .ok_or(ConfigError {
            pointer: "/warp/domain".into(),
            message: "expected [min, max]".into(),
        })?;
    if domain.len() != 2 {
        return err("/warp/domain", "expected [min, max]");
    }
    let lo = get_f64(&domain[0], "/warp/domain/0")?;
    let hi = get_f64(&domain[1], "/warp/domain/1")?;
    let field = ScalarField1D::new(expr, var, (lo, hi)).map_err(|e| ConfigError {
        pointer: "/warp/expr".into(),
        message: e.to_string(),
    })?;
    field.check_positive(256).map_err(|e| ConfigError {
        pointer: "/warp/expr".into(),
        message: e.to_string(),
    })?;
    Ok(field)
}

/// Pull the `A_scale` perturbation knob out of the document (it is an
/// override-only key, not part of the schema).
pub fn extract_a_scale(doc: &mut Value) -> Result<f64, ConfigError> {
    let Some(map) = doc.as_object_mut() else {
        return Ok(1.0);
    };
    match map.remove("A_scale") {
        None => Ok(1.0),
        Some(v) => v.as_f64().ok_or(ConfigError {
            pointer: "/A_scale".into(),
            message: "expected a number".into(),
        }),
    }
}
