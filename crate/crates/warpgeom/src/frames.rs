//! Connection-form assembly and the flatness of the Maurer-Cartan form.
//!
//! Frame/ambient index layout is `(0, 1…n, n+1)`: slot 0 is the fiber-normal
//! slot, slots 1..n the tangent frame, slot n+1 the `∂_t` slot. The fiber
//! normal is normalized as `e₀ = Ξ/a` (outward position normal), so
//!
//!   `ω_{i0}(X)    = ε_i ⟨e_i, X − ε η(X) T⟩ / a`
//!   `ω_{n+1,0}(X) = −ε ε_{n+1} T_{n+1} η(X) / a`
//!
//! for both signs of the fiber curvature; the immersion built downstream
//! then satisfies `χ_α = ε_α B_{α0}` with χ on the quadric for c = ±1 alike.
//!
//! When the data carries exact metric/frame derivatives the Levi-Civita
//! block `ω_{ij}` is pure algebra and form entries carry no
//! finite-difference error; otherwise 2nd-order stencils are used.

use crate::calculus::{
    christoffel, exterior_d_matrix, wedge, Christoffel, MatrixOneForm, MetricDerivs,
};
use crate::conditions::{run_all, CheckReport};
use crate::error::{Error, Result};
use crate::grid::{pair_list, ChartGrid};
use crate::surface::HypersurfaceData;

/// Ω, 𝐗, Υ = Ω − 𝐗 plus the dual forms and extended T-components.
#[derive(Clone, Debug)]
pub struct FrameFormBundle {
    pub omega: MatrixOneForm,
    pub x: MatrixOneForm,
    pub upsilon: MatrixOneForm,
    /// dual 1-forms ω_α, node-major `[d][α]`; slots 0 and n+1 identically 0
    pub duals: Vec<f64>,
    /// extended components (T_0 = 0, T_1…T_n, T_{n+1}), node-major
    pub t_ext: Vec<f64>,
}

impl FrameFormBundle {
    /// ω_α(∂_d) at `node`.
    pub fn dual(&self, grid: &ChartGrid, node: usize, d: usize, alpha: usize) -> f64 {
        let m = self.upsilon.m;
        self.duals[(node * grid.dim() + d) * m + alpha]
    }
}

/// Gating policy against the structure checks before form assembly.
#[derive(Clone, Copy, Debug)]
pub enum GatePolicy {
    Skip,
    /// warn (collect messages) when residuals exceed the effective gate
    Warn { tau_struct: f64 },
    /// hard error on breach
    Strict { tau_struct: f64 },
}

/// Default structure gate, calibrated so the worked scenarios clear it with
/// a ~4× margin at 200 nodes per axis while a 10% shape-operator scaling
/// trips the Gauss check by more than an order of magnitude.
pub const DEFAULT_TAU_STRUCT: f64 = 5e-2;

/// The gate scales with the squared spacing so that a fixed `tau_struct`
/// keeps the same meaning across resolutions (FD residuals shrink like Δ²);
/// the reference spacing is the default 200-node grid of the worked
/// scenarios.
pub fn effective_gate(tau_struct: f64, grid: &ChartGrid) -> f64 {
    let h = grid.max_spacing();
    tau_struct * (h / 1.5e-2).powi(2).max(1.0)
}

pub struct BuildOutcome {
    pub bundle: FrameFormBundle,
    pub gate_reports: Vec<CheckReport>,
    pub warnings: Vec<String>,
}

/// Assemble Ω, 𝐗 and Υ from hypersurface data.
///
/// Requires `ε_{n+1} = ε`: the parallel frame ends with `Ē_{n+1} = ∂_t`, so
/// its sign slot is forced to ⟨∂_t,∂_t⟩ = ε. Data with a timelike/spacelike
/// mismatch is rejected rather than silently reordered.
pub fn build_connection_forms(data: &HypersurfaceData, gate: GatePolicy) -> Result<BuildOutcome> {
    if data.signs.eps_normal() != data.signs.epsilon {
        return Err(Error::Signs(format!(
            "frame assembly requires ε_{{n+1}} = ε (parallel frame ends with ∂_t); got ε_{{n+1}} = {}, ε = {}",
            data.signs.eps_normal(),
            data.signs.epsilon
        )));
    }
    let mut gate_reports = Vec::new();
    let mut warnings = Vec::new();
    match gate {
        GatePolicy::Skip => {}
        GatePolicy::Warn { tau_struct } | GatePolicy::Strict { tau_struct } => {
            let gate_value = effective_gate(tau_struct, &data.grid);
            let reports = run_all(data)?;
            for rep in &reports {
                let limit = if rep.fd_based { gate_value } else { 1e-10 };
                if rep.max_abs > limit {
                    let msg = format!(
                        "structure check `{}` residual {:.3e} exceeds gate {:.3e}",
                        rep.name, rep.max_abs, limit
                    );
                    if matches!(gate, GatePolicy::Strict { .. }) {
                        return Err(Error::StructureGate {
                            check: rep.name.into(),
                            residual: rep.max_abs,
                            gate: limit,
                        });
                    }
                    warnings.push(msg);
                }
            }
            gate_reports = reports;
        }
    }

    let bundle = assemble(data)?;
    Ok(BuildOutcome {
        bundle,
        gate_reports,
        warnings,
    })
}

fn frame_partials(data: &HypersurfaceData) -> Vec<Vec<f64>> {
    // ∂_d e_i^q per node: analytic when present, FD otherwise
    let grid = &data.grid;
    let n = data.n();
    let mut out = vec![vec![0.0; grid.len()]; n * n * n];
    match &data.analytic {
        Some(a) => {
            for node in grid.nodes() {
                for d in 0..n {
                    for i in 0..n {
                        for q in 0..n {
                            out[(d * n + i) * n + q][node] =
                                a.frame_d1[((node * n + d) * n + i) * n + q];
                        }
                    }
                }
            }
        }
        None => {
            for d in 0..n {
                for i in 0..n {
                    for q in 0..n {
                        out[(d * n + i) * n + q] =
                            grid.partial_strided(&data.frame.data, n * n, i * n + q, d);
                    }
                }
            }
        }
    }
    out
}

fn data_christoffel(data: &HypersurfaceData) -> Result<Christoffel> {
    match &data.analytic {
        Some(a) => christoffel(
            &data.grid,
            &data.metric,
            MetricDerivs::Analytic(&a.metric_d1),
        ),
        None => christoffel(&data.grid, &data.metric, MetricDerivs::Fd),
    }
}

fn assemble(data: &HypersurfaceData) -> Result<FrameFormBundle> {
    let grid = &data.grid;
    let n = data.n();
    let m = n + 2;
    let gamma = data_christoffel(data)?;
    let de = frame_partials(data);

    let mut omega = MatrixOneForm::zeros(grid, m);
    let mut x = MatrixOneForm::zeros(grid, m);
    let mut duals = vec![0.0; grid.len() * n * m];
    let mut t_ext = vec![0.0; grid.len() * m];

    let eps = data.signs.epsilon;
    let e_of = |alpha: usize| data.signs.eps[alpha];

    for node in grid.nodes() {
        let g = data.metric.at(node);
        let pairing = data.frame_metric_pairing(node); // g(e_i, ∂_d)
        let eta = data.eta_coords(node);
        let aj = data.warp_jet(node)?;
        let a = aj.v;
        let da = aj.d1 / a;
        let tn = data.t_normal[node];
        let t = data.t_at(node);

        for d in 0..n {
            duals[(node * n + d) * m] = 0.0;
            for i in 0..n {
                duals[(node * n + d) * m + 1 + i] = e_of(i + 1) * pairing[i * n + d];
            }
            duals[(node * n + d) * m + n + 1] = 0.0;
        }
        t_ext[node * m] = 0.0;
        for i in 0..n {
            t_ext[node * m + 1 + i] = t[i];
        }
        t_ext[node * m + n + 1] = tn;

        // frame components of ∂_d: c_k = ε_k g(e_k, ∂_d)
        let mut coord_frame = vec![0.0; n * n]; // [d][k]
        for d in 0..n {
            for k in 0..n {
                coord_frame[d * n + k] = e_of(k + 1) * pairing[k * n + d];
            }
        }
        let af = data.shape.at(node);

        for d in 0..n {
            let blk = omega.block_mut(node, d);
            // Levi-Civita block ω_{ij}(∂_d) = ε_i ⟨e_i, ∇_{∂_d} e_j⟩,
            // filled for i < j and reflected (skew by construction).
            for j in 0..n {
                // ∇_{∂_d} e_j in coordinates
                let ej = data.frame.vector(node, j);
                let mut cov = vec![0.0; n];
                for q in 0..n {
                    let mut v = de[(d * n + j) * n + q][node];
                    for mm in 0..n {
                        v += gamma.at(node, q, d, mm) * ej[mm];
                    }
                    cov[q] = v;
                }
                for i in 0..j {
                    let ei = data.frame.vector(node, i);
                    let mut ip = 0.0;
                    for p in 0..n {
                        for q in 0..n {
                            ip += g[p * n + q] * ei[p] * cov[q];
                        }
                    }
                    let w_ij = e_of(i + 1) * ip;
                    blk[(1 + i) * m + (1 + j)] = w_ij;
                    blk[(1 + j) * m + (1 + i)] = -e_of(i + 1) * e_of(j + 1) * w_ij;
                }
            }
            // ω_{i,n+1}(∂_d) = −ε_i ⟨e_i, A ∂_d⟩ = −(A_f c)_i
            for i in 0..n {
                let mut afc = 0.0;
                for k in 0..n {
                    afc += af[i * n + k] * coord_frame[d * n + k];
                }
                let w = -afc;
                blk[(1 + i) * m + (n + 1)] = w;
                blk[(n + 1) * m + (1 + i)] = -e_of(i + 1) * e_of(n + 1) * w;
            }
            // ω_{i0}(∂_d) = ε_i (g(e_i,∂_d) − ε η_d T_i) / a
            for i in 0..n {
                let w = e_of(i + 1) * (pairing[i * n + d] - eps * eta[d] * t[i]) / a;
                blk[(1 + i) * m] = w;
                blk[0 * m + (1 + i)] = -e_of(0) * e_of(i + 1) * w;
            }
            // ω_{n+1,0}(∂_d) = −ε ε_{n+1} T_{n+1} η_d / a
            {
                let w = -eps * e_of(n + 1) * tn * eta[d] / a;
                blk[(n + 1) * m] = w;
                blk[0 * m + (n + 1)] = -e_of(0) * e_of(n + 1) * w;
            }

            // 𝐗_{αβ}(∂_d) = ε (a′/a)(T_β ω_α − ε_α ε_β T_α ω_β)
            let xblk = x.block_mut(node, d);
            for alpha in 0..m {
                let wa = duals[(node * n + d) * m + alpha];
                let ta = t_ext[node * m + alpha];
                for beta in 0..m {
                    if alpha == beta {
                        continue;
                    }
                    let wb = duals[(node * n + d) * m + beta];
                    let tb = t_ext[node * m + beta];
                    xblk[alpha * m + beta] =
                        eps * da * (tb * wa - e_of(alpha) * e_of(beta) * ta * wb);
                }
            }
        }
    }

    let mut upsilon = MatrixOneForm::zeros(grid, m);
    for (u, (o, xv)) in upsilon
        .data
        .iter_mut()
        .zip(omega.data.iter().zip(&x.data))
    {
        *u = o - xv;
    }

    Ok(FrameFormBundle {
        omega,
        x,
        upsilon,
        duals,
        t_ext,
    })
}

/// The 𝐗 matrix alone (exposed for golden comparisons).
pub fn build_x(data: &HypersurfaceData) -> Result<MatrixOneForm> {
    Ok(assemble(data)?.x)
}

#[derive(Clone, Debug)]
pub struct FlatnessReport {
    /// max over interior nodes of the max-norm of dΥ + Υ∧Υ
    pub max_abs: f64,
    pub mean_abs: f64,
    pub argmax: usize,
    /// per-node field (max over coordinate pairs and entries)
    pub field: Vec<f64>,
    /// secondary first-structure residual: max-norm of dϖ + Ω∧ϖ
    pub cartan_first_max: f64,
}

/// Residual of `dΥ + Υ∧Υ = 0`, with the first structure equation
/// `dϖ = −Ω∧ϖ` as a secondary report.
pub fn flatness_residual(
    grid: &ChartGrid,
    bundle: &FrameFormBundle,
) -> Result<FlatnessReport> {
    let m = bundle.upsilon.m;
    let n = grid.dim();
    let pairs = pair_list(n);
    let d_ups = exterior_d_matrix(grid, &bundle.upsilon);
    let ww = wedge(grid, &bundle.upsilon, &bundle.upsilon)?;
    let mut field = vec![0.0; grid.len()];
    for node in grid.nodes() {
        let mut worst = 0.0f64;
        for pi in 0..pairs.len() {
            let a = d_ups.block(node, pi);
            let b = ww.block(node, pi);
            for c in 0..m * m {
                worst = worst.max((a[c] + b[c]).abs());
            }
        }
        field[node] = worst;
    }
    let interior = grid.interior_nodes(crate::conditions::REPORT_MARGIN);
    let mut max_abs = 0.0f64;
    let mut argmax = 0;
    let mut sum = 0.0;
    for &node in &interior {
        if field[node] > max_abs {
            max_abs = field[node];
            argmax = node;
        }
        sum += field[node];
    }

    // dϖ + Ω∧ϖ on coordinate pairs: needs ∂_d(ω_α(∂_e)) for all d, e
    let mut cartan_first_max = 0.0f64;
    let mut dwall = vec![Vec::new(); n * n * m];
    for d in 0..n {
        for e in 0..n {
            for alpha in 0..m {
                dwall[(d * n + e) * m + alpha] =
                    grid.partial_strided(&bundle.duals, n * m, e * m + alpha, d);
            }
        }
    }
    for &node in &interior {
        for &(d, e) in pairs {
            for alpha in 0..m {
                let dpi = dwall[(d * n + e) * m + alpha][node]
                    - dwall[(e * n + d) * m + alpha][node];
                let mut rhs = 0.0;
                for gmm in 0..m {
                    rhs += bundle.omega.at(node, d, alpha, gmm)
                        * bundle.duals[(node * n + e) * m + gmm]
                        - bundle.omega.at(node, e, alpha, gmm)
                            * bundle.duals[(node * n + d) * m + gmm];
                }
                cartan_first_max = cartan_first_max.max((dpi + rhs).abs());
            }
        }
    }

    Ok(FlatnessReport {
        max_abs,
        mean_abs: if interior.is_empty() {
            0.0
        } else {
            sum / interior.len() as f64
        },
        argmax,
        field,
        cartan_first_max,
    })
}

/// The identity `Σ_γ T_γ ω_{γ0} = 0`, which the norm identity forces
/// pointwise; assertable per node.
pub fn t_omega_identity_residual(
    grid: &ChartGrid,
    bundle: &FrameFormBundle,
) -> f64 {
    let m = bundle.omega.m;
    let n = grid.dim();
    let mut worst = 0.0f64;
    for node in grid.nodes() {
        for d in 0..n {
            let mut s = 0.0;
            for gmm in 0..m {
                s += bundle.t_ext[node * m + gmm] * bundle.omega.at(node, d, gmm, 0);
            }
            worst = worst.max(s.abs());
        }
    }
    worst
}
