//! The six structure conditions evaluated as per-node residual fields.
//!
//! Conditions (A) and (B) are pure algebra on the sampled data; the
//! T = ε grad π check and conditions (C)–(F) differentiate sampled fields
//! with the 2nd-order stencils of [`crate::calculus`], so their residuals on
//! smooth data shrink like Δ². Reported maxima use interior nodes only
//! (margin 2).

use crate::ambient::{codazzi_coefficient, gauss_rhs, GaussData};
use crate::calculus::{christoffel, riemann, Christoffel, MetricDerivs};
use crate::error::{Error, Result};
use crate::grid::pair_list;
use crate::surface::HypersurfaceData;

/// Margin (in nodes) excluded from reported residual maxima.
pub const REPORT_MARGIN: usize = 2;

/// Max/mean/argmax summary of one residual field.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: &'static str,
    pub max_abs: f64,
    pub mean_abs: f64,
    pub argmax: usize,
    /// true when the check involves finite differences of sampled fields
    pub fd_based: bool,
    /// optional named companion residual (e.g. |dη| for the gradient check)
    pub secondary: Option<(&'static str, f64)>,
    /// per-node residual field (max over directions/components at the node)
    pub field: Vec<f64>,
}

fn summarize(
    name: &'static str,
    fd_based: bool,
    data: &HypersurfaceData,
    field: Vec<f64>,
) -> CheckReport {
    let mut max_abs = 0.0f64;
    let mut argmax = 0;
    let mut sum = 0.0f64;
    let mut count = 0usize;
    for node in data.grid.nodes() {
        if !data.grid.is_interior(node, REPORT_MARGIN) {
            continue;
        }
        let v = field[node].abs();
        if v > max_abs {
            max_abs = v;
            argmax = node;
        }
        sum += v;
        count += 1;
    }
    CheckReport {
        name,
        max_abs,
        mean_abs: if count > 0 { sum / count as f64 } else { 0.0 },
        argmax,
        fd_based,
        secondary: None,
        field,
    }
}

/// Condition (A): `⟨A e_i, e_j⟩ = ⟨e_i, A e_j⟩`.
///
/// In the orthonormal frame basis this is `ε_j A_ji = ε_i A_ij`.
pub fn check_self_adjoint(data: &HypersurfaceData) -> CheckReport {
    let n = data.n();
    let field = data
        .grid
        .nodes()
        .map(|node| {
            let a = data.shape.at(node);
            let mut worst = 0.0f64;
            for i in 0..n {
                for j in (i + 1)..n {
                    let ei = data.signs.tangent_sign(i + 1);
                    let ej = data.signs.tangent_sign(j + 1);
                    worst = worst.max((ej * a[j * n + i] - ei * a[i * n + j]).abs());
                }
            }
            worst
        })
        .collect();
    summarize("self_adjoint", false, data, field)
}

/// Condition (B): `ε = ⟨T,T⟩ + ε_{n+1} T_{n+1}²`.
pub fn check_norm_identity(data: &HypersurfaceData) -> CheckReport {
    let n = data.n();
    let field = data
        .grid
        .nodes()
        .map(|node| {
            let t = data.t_at(node);
            let mut tt = 0.0;
            for k in 0..n {
                tt += data.signs.tangent_sign(k + 1) * t[k] * t[k];
            }
            let tn = data.t_normal[node];
            (tt + data.signs.eps_normal() * tn * tn - data.signs.epsilon).abs()
        })
        .collect();
    summarize("norm_identity", false, data, field)
}

/// `T = ε grad π`, checked as `η_d = ε ∂_d π` per direction, with the
/// closedness `|dη|` reported as a secondary residual.
pub fn check_t_is_grad_pi(data: &HypersurfaceData) -> CheckReport {
    let grid = &data.grid;
    let n = data.n();
    let dpi: Vec<Vec<f64>> = (0..n).map(|d| grid.partial(&data.pi, d)).collect();
    let eta: Vec<Vec<f64>> = {
        let mut per_dir = vec![vec![0.0; grid.len()]; n];
        for node in grid.nodes() {
            let e = data.eta_coords(node);
            for d in 0..n {
                per_dir[d][node] = e[d];
            }
        }
        per_dir
    };
    let field: Vec<f64> = grid
        .nodes()
        .map(|node| {
            (0..n)
                .map(|d| (eta[d][node] - data.signs.epsilon * dpi[d][node]).abs())
                .fold(0.0f64, f64::max)
        })
        .collect();
    // dη on coordinate pairs
    let mut eta_form = crate::calculus::OneFormField::zeros(grid);
    for node in grid.nodes() {
        for d in 0..n {
            eta_form.data[node * n + d] = eta[d][node];
        }
    }
    let deta = crate::calculus::exterior_d(grid, &eta_form);
    let deta_max = grid
        .interior_nodes(REPORT_MARGIN)
        .iter()
        .flat_map(|&k| (0..pair_list(n).len()).map(move |p| (k, p)))
        .map(|(k, p)| deta.at(k, p).abs())
        .fold(0.0f64, f64::max);
    let mut rep = summarize("t_is_grad_pi", true, data, field);
    rep.secondary = Some(("d_eta", deta_max));
    rep
}

fn coordinate_t_fields(data: &HypersurfaceData) -> Vec<f64> {
    let n = data.n();
    let mut out = vec![0.0; data.grid.len() * n];
    for node in data.grid.nodes() {
        let t = data.t_coords(node);
        out[node * n..(node + 1) * n].copy_from_slice(&t);
    }
    out
}

fn shape_coord_fields(data: &HypersurfaceData) -> Result<Vec<f64>> {
    let n = data.n();
    let mut out = vec![0.0; data.grid.len() * n * n];
    for node in data.grid.nodes() {
        let a = data.shape_coords(node)?;
        out[node * n * n..(node + 1) * n * n].copy_from_slice(&a);
    }
    Ok(out)
}

fn fd_christoffel(data: &HypersurfaceData) -> Result<Christoffel> {
    christoffel(&data.grid, &data.metric, MetricDerivs::Fd)
}

/// Condition (C): `∇_X T = (a′/a)(X − ε η(X) T) + ε_{n+1} T_{n+1} A X`.
///
/// Evaluated on coordinate directions; the residual vector is converted to
/// frame components so the reported numbers are scale-consistent.
pub fn check_nabla_t(data: &HypersurfaceData) -> Result<CheckReport> {
    let grid = &data.grid;
    let n = data.n();
    let gamma = fd_christoffel(data)?;
    let t_coord = coordinate_t_fields(data);
    let a_coord = shape_coord_fields(data)?;
    // ∂_d T^q
    let mut dts = Vec::with_capacity(n * n);
    for d in 0..n {
        for q in 0..n {
            dts.push(grid.partial_strided(&t_coord, n, q, d));
        }
    }
    let mut field = vec![0.0; grid.len()];
    for node in grid.nodes() {
        let aj = data.warp_jet(node)?;
        let da = aj.d1 / aj.v;
        let eta = data.eta_coords(node);
        let t = &t_coord[node * n..(node + 1) * n];
        let ac = &a_coord[node * n * n..(node + 1) * n * n];
        let tn = data.t_normal[node];
        let en = data.signs.eps_normal();
        let eps = data.signs.epsilon;
        let mut worst = 0.0f64;
        for d in 0..n {
            let mut res = vec![0.0; n];
            for q in 0..n {
                let mut cov = dts[d * n + q][node];
                for m in 0..n {
                    cov += gamma.at(node, q, d, m) * t[m];
                }
                let x_q = if q == d { 1.0 } else { 0.0 };
                let rhs = da * (x_q - eps * eta[d] * t[q]) + en * tn * ac[q * n + d];
                res[q] = cov - rhs;
            }
            let fr = data.to_frame_components(node, &res);
            for v in fr {
                worst = worst.max(v.abs());
            }
        }
        field[node] = worst;
    }
    Ok(summarize("nabla_t", true, data, field))
}

/// Condition (D): `X(T_{n+1}) = −⟨AT, X⟩ − ε (a′/a) T_{n+1} η(X)`.
pub fn check_dt_normal(data: &HypersurfaceData) -> Result<CheckReport> {
    let grid = &data.grid;
    let n = data.n();
    let dtn: Vec<Vec<f64>> = (0..n).map(|d| grid.partial(&data.t_normal, d)).collect();
    let mut field = vec![0.0; grid.len()];
    for node in grid.nodes() {
        let aj = data.warp_jet(node)?;
        let da = aj.d1 / aj.v;
        let eta = data.eta_coords(node);
        let pairing = data.frame_metric_pairing(node); // g(e_l, ∂_d)
        let af = data.shape.at(node);
        let t = data.t_at(node);
        let tn = data.t_normal[node];
        let eps = data.signs.epsilon;
        // AT in the frame basis: coefficients c_k = ε_k T_k, (A_f c)_l
        let mut atc = vec![0.0; n];
        for l in 0..n {
            for k in 0..n {
                atc[l] += af[l * n + k] * data.signs.tangent_sign(k + 1) * t[k];
            }
        }
        let mut worst = 0.0f64;
        for d in 0..n {
            // ⟨AT, ∂_d⟩ = Σ_l (A_f c)_l g(e_l, ∂_d)
            let mut at_x = 0.0;
            for l in 0..n {
                at_x += atc[l] * pairing[l * n + d];
            }
            let rhs = -at_x - eps * da * tn * eta[d];
            worst = worst.max((dtn[d][node] - rhs).abs());
        }
        field[node] = worst;
    }
    Ok(summarize("dt_normal", true, data, field))
}

/// Condition (E), the Codazzi equation:
/// `(∇_X A)Y − (∇_Y A)X = T_{n+1}(a″/a − (a′/a)² + εε₀/a²)(η(Y)X − η(X)Y)`.
///
/// The covariant derivative of A transports the frame-based components
/// through the coordinate Christoffels via the frame change at each node.
pub fn check_codazzi(data: &HypersurfaceData) -> Result<CheckReport> {
    let grid = &data.grid;
    let n = data.n();
    let gamma = fd_christoffel(data)?;
    let a_coord = shape_coord_fields(data)?;
    let mut das = Vec::with_capacity(n * n * n);
    for d in 0..n {
        for c in 0..n * n {
            das.push(grid.partial_strided(&a_coord, n * n, c, d));
        }
    }
    let pairs = pair_list(n);
    let mut field = vec![0.0; grid.len()];
    for node in grid.nodes() {
        let aj = data.warp_jet(node)?;
        let coeff = codazzi_coefficient(data.t_normal[node], aj, &data.signs);
        let eta = data.eta_coords(node);
        let ac = &a_coord[node * n * n..(node + 1) * n * n];
        let mut worst = 0.0f64;
        for &(d, e) in pairs {
            // (∇_d A)^p_e − (∇_e A)^p_d
            let mut res = vec![0.0; n];
            for p in 0..n {
                let mut v = das[d * n * n + p * n + e][node] - das[e * n * n + p * n + d][node];
                for m in 0..n {
                    v += gamma.at(node, p, d, m) * ac[m * n + e]
                        - gamma.at(node, m, d, e) * ac[p * n + m]
                        - gamma.at(node, p, e, m) * ac[m * n + d]
                        + gamma.at(node, m, e, d) * ac[p * n + m];
                }
                let rhs = coeff * (eta[e] * f64::from(p == d) - eta[d] * f64::from(p == e));
                res[p] = v - rhs;
            }
            let fr = data.to_frame_components(node, &res);
            for v in fr {
                worst = worst.max(v.abs());
            }
        }
        field[node] = worst;
    }
    Ok(summarize("codazzi", true, data, field))
}

/// Condition (F), the Gauss equation, over the spanning coordinate index
/// combinations (one in chart dimension 2, six in dimension 3).
pub fn check_gauss(data: &HypersurfaceData) -> Result<CheckReport> {
    let grid = &data.grid;
    let n = data.n();
    let gamma = fd_christoffel(data)?;
    let riem = riemann(grid, &data.metric, &gamma);
    let a_coord = shape_coord_fields(data)?;
    let pairs = pair_list(n);
    let mut field = vec![0.0; grid.len()];
    for node in grid.nodes() {
        let aj = data.warp_jet(node)?;
        let g = data.metric.at(node);
        let eta = data.eta_coords(node);
        let ac = &a_coord[node * n * n..(node + 1) * n * n];
        // ⟨A ∂_j, ∂_k⟩ = Σ_p A^p_j g_pk
        let mut ag = vec![0.0; n * n];
        for j in 0..n {
            for k in 0..n {
                let mut s = 0.0;
                for p in 0..n {
                    s += ac[p * n + j] * g[p * n + k];
                }
                ag[j * n + k] = s;
            }
        }
        // symmetrized estimator: each of the eight orderings equals the true
        // component analytically; averaging makes the finite-difference
        // estimate exactly invariant under chart relabeling
        let rsym = |i: usize, j: usize, k: usize, l: usize| -> f64 {
            (riem.at(node, i, j, k, l) - riem.at(node, j, i, k, l)
                - riem.at(node, i, j, l, k)
                + riem.at(node, j, i, l, k)
                + riem.at(node, k, l, i, j)
                - riem.at(node, l, k, i, j)
                - riem.at(node, k, l, j, i)
                + riem.at(node, l, k, j, i))
                / 8.0
        };
        let mut worst = 0.0f64;
        for (pa, &(i, j)) in pairs.iter().enumerate() {
            for &(k, l) in pairs.iter().skip(pa) {
                let lhs = rsym(i, j, k, l);
                let d = GaussData {
                    xz: g[i * n + k],
                    yw: g[j * n + l],
                    yz: g[j * n + k],
                    xw: g[i * n + l],
                    eta_x: eta[i],
                    eta_y: eta[j],
                    eta_z: eta[k],
                    eta_w: eta[l],
                    ayz: ag[j * n + k],
                    axw: ag[i * n + l],
                    ayw: ag[j * n + l],
                    axz: ag[i * n + k],
                };
                let rhs = gauss_rhs(&d, aj, &data.signs);
                worst = worst.max((lhs - rhs).abs());
            }
        }
        field[node] = worst;
    }
    Ok(summarize("gauss", true, data, field))
}

/// The ρ-reformulation residuals: `dρ = ε ρ̃ η` and `dρ̃ = ε ρ̄ η`.
pub fn check_rho(data: &HypersurfaceData) -> Result<Vec<CheckReport>> {
    let rho = data
        .rho
        .as_ref()
        .ok_or_else(|| Error::Data("no ρ fields present".into()))?;
    let grid = &data.grid;
    let n = data.n();
    let mut reports = Vec::new();
    for (name, f, factor) in [
        ("d_rho", &rho.rho, &rho.rho_t),
        ("d_rho_tilde", &rho.rho_t, &rho.rho_b),
    ] {
        let df: Vec<Vec<f64>> = (0..n).map(|d| grid.partial(f, d)).collect();
        let field: Vec<f64> = grid
            .nodes()
            .map(|node| {
                let eta = data.eta_coords(node);
                (0..n)
                    .map(|d| {
                        (df[d][node] - data.signs.epsilon * factor[node] * eta[d]).abs()
                    })
                    .fold(0.0f64, f64::max)
            })
            .collect();
        reports.push(summarize(name, true, data, field));
    }
    Ok(reports)
}

/// All applicable checks, in report order.
pub fn run_all(data: &HypersurfaceData) -> Result<Vec<CheckReport>> {
    let mut out = vec![
        check_self_adjoint(data),
        check_norm_identity(data),
        check_t_is_grad_pi(data),
        check_nabla_t(data)?,
        check_dt_normal(data)?,
        check_codazzi(data)?,
        check_gauss(data)?,
    ];
    if data.rho.is_some() {
        out.extend(check_rho(data)?);
    }
    Ok(out)
}

/// Max of a per-node residual field over the fixed central box that keeps
/// `frac` of each axis span away from the boundary. Convergence orders are
/// measured on this box: the plain interior margin is a node count, so at
/// finer resolutions it creeps toward the boundary and the error constants
/// under the max change with it.
pub fn box_max(grid: &crate::grid::ChartGrid, field: &[f64], frac: f64) -> f64 {
    let dim = grid.dim();
    let mut worst = 0.0f64;
    'outer: for node in grid.nodes() {
        for d in 0..dim {
            let ax = &grid.axes()[d];
            let margin = frac * (ax.max - ax.min);
            let c = grid.coord(node, d);
            if c < ax.min + margin || c > ax.max - margin {
                continue 'outer;
            }
        }
        worst = worst.max(field[node].abs());
    }
    worst
}

/// Bin nodes by π value; the bin width is one finite-difference cell of
/// π-variation, the smallest width that tolerates discretization without
/// merging distinct level sets.
pub struct PiBins {
    pub width: f64,
    pub origin: f64,
    /// bin id per node
    pub labels: Vec<usize>,
    /// distinct bin ids in ascending π order
    pub ids: Vec<usize>,
}

pub fn pi_bins(data: &HypersurfaceData) -> PiBins {
    let grid = &data.grid;
    let n = data.n();
    let dpi: Vec<Vec<f64>> = (0..n).map(|d| grid.partial(&data.pi, d)).collect();
    let mut cell = 0.0f64;
    for node in grid.nodes() {
        for d in 0..n {
            cell = cell.max((dpi[d][node] * grid.spacing(d)).abs());
        }
    }
    let lo = data.pi.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = data.pi.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let width = if cell > 0.0 {
        cell
    } else {
        (hi - lo).max(1e-12)
    };
    let labels: Vec<usize> = data
        .pi
        .iter()
        .map(|&p| ((p - lo) / width).floor() as usize)
        .collect();
    let mut ids: Vec<usize> = labels.clone();
    ids.sort_unstable();
    ids.dedup();
    PiBins {
        width,
        origin: lo,
        labels,
        ids,
    }
}

/// One row of the recovered warp table.
#[derive(Clone, Debug)]
pub struct WarpRow {
    pub t: f64,
    pub a: f64,
    /// max ρ spread inside the bin
    pub spread: f64,
    pub nodes: usize,
}

/// Recover `a(t)` from ρ by binning nodes along π: ρ must be constant on
/// each level set, so its bin-mean against the bin-mean of π tabulates the
/// warping function. Errors when ρ is multi-valued over a bin.
pub fn recover_warp(data: &HypersurfaceData) -> Result<Vec<WarpRow>> {
    let rho = data
        .rho
        .as_ref()
        .ok_or_else(|| Error::Data("no ρ fields present".into()))?;
    let n = data.n();
    // level sets must be regular: T ≠ 0 at every node
    for node in data.grid.nodes() {
        let t = data.t_at(node);
        if (0..n).map(|k| t[k].abs()).fold(0.0f64, f64::max) < 1e-8 {
            return Err(Error::Inconsistent(format!(
                "T vanishes at node {node}; π has no regular level sets there"
            )));
        }
    }
    let bins = pi_bins(data);
    let rho_t_max = rho
        .rho_t
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let mut table = Vec::new();
    for &id in &bins.ids {
        let mut pi_sum = 0.0;
        let mut rho_sum = 0.0;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut count = 0usize;
        for node in data.grid.nodes() {
            if bins.labels[node] != id {
                continue;
            }
            pi_sum += data.pi[node];
            rho_sum += rho.rho[node];
            lo = lo.min(rho.rho[node]);
            hi = hi.max(rho.rho[node]);
            count += 1;
        }
        let spread = hi - lo;
        let allowed = 4.0 * rho_t_max * bins.width + 1e-7 * rho_sum.abs().max(1.0) / count as f64;
        if spread > allowed {
            return Err(Error::Inconsistent(format!(
                "ρ is multi-valued over π-bin {id}: spread {spread:.3e} exceeds {allowed:.3e}"
            )));
        }
        table.push(WarpRow {
            t: pi_sum / count as f64,
            a: rho_sum / count as f64,
            spread,
            nodes: count,
        });
    }
    Ok(table)
}
