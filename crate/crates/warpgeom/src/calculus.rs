//! Finite-difference tensor calculus on a chart grid.
//!
//! Christoffel symbols, the lowered Riemann tensor, the exterior derivative
//! and the wedge of matrix-valued 1-forms. The curvature convention is
//! `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_{[X,Y]}Z` and the lowered tensor is
//! `R(X,Y,Z,W) = ⟨R(X,Y)Z, W⟩`; with this convention the round unit sphere
//! `g = diag(1, sin²u)` has `R(∂u,∂v,∂v,∂u) = sin²u` (hand anchor shared with
//! the ambient-curvature module).
//!
//! Stencils are 2nd order everywhere; residual claims quote interior nodes
//! only, so boundary one-sided values never pollute reported maxima. Where a
//! caller owns exact first derivatives of the metric (expression-backed
//! fields), Christoffel assembly accepts them and becomes pure algebra.

use crate::error::{Error, Result};
use crate::grid::{pair_list, ChartGrid};

pub const METRIC_DEGENERACY_FLOOR: f64 = 1e-10;

/// Per-node symmetric n×n metric in chart coordinates, node-major.
#[derive(Clone, Debug)]
pub struct MetricField {
    pub n: usize,
    pub data: Vec<f64>,
}

impl MetricField {
    pub fn zeros(grid: &ChartGrid) -> MetricField {
        let n = grid.dim();
        MetricField {
            n,
            data: vec![0.0; grid.len() * n * n],
        }
    }

    #[inline]
    pub fn at(&self, node: usize) -> &[f64] {
        let s = self.n * self.n;
        &self.data[node * s..(node + 1) * s]
    }

    #[inline]
    pub fn at_mut(&mut self, node: usize) -> &mut [f64] {
        let s = self.n * self.n;
        &mut self.data[node * s..(node + 1) * s]
    }

    /// Symmetry, non-degeneracy and signature constancy across the grid.
    pub fn validate(&self, grid: &ChartGrid) -> Result<()> {
        let n = self.n;
        let mut signature: Option<usize> = None;
        for node in grid.nodes() {
            let g = self.at(node);
            for i in 0..n {
                for j in 0..n {
                    if !g[i * n + j].is_finite() {
                        return Err(Error::NonFinite {
                            context: format!("metric at node {node}"),
                        });
                    }
                    if (g[i * n + j] - g[j * n + i]).abs() > 1e-10 {
                        return Err(Error::Data(format!(
                            "metric not symmetric at node {node}: g[{i}{j}] = {}, g[{j}{i}] = {}",
                            g[i * n + j],
                            g[j * n + i]
                        )));
                    }
                }
            }
            let det = det_small(g, n);
            if det.abs() < METRIC_DEGENERACY_FLOOR {
                return Err(Error::DegenerateMetric { node, det });
            }
            let negatives = eigen_sign_count(g, n);
            match signature {
                None => signature = Some(negatives),
                Some(s) if s != negatives => {
                    return Err(Error::Data(format!(
                        "metric signature changes across the grid (node {node}: {negatives} negative directions, expected {s})"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn inverse_at(&self, node: usize) -> Result<Vec<f64>> {
        let g = self.at(node);
        invert_small(g, self.n).ok_or(Error::DegenerateMetric {
            node,
            det: det_small(g, self.n),
        })
    }
}

pub fn det_small(a: &[f64], n: usize) -> f64 {
    match n {
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => panic!("det_small only supports n ≤ 3"),
    }
}

pub fn invert_small(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let det = det_small(a, n);
    if det.abs() < METRIC_DEGENERACY_FLOOR {
        return None;
    }
    let inv_det = 1.0 / det;
    Some(match n {
        1 => vec![inv_det],
        2 => vec![
            a[3] * inv_det,
            -a[1] * inv_det,
            -a[2] * inv_det,
            a[0] * inv_det,
        ],
        3 => {
            let c = |i: usize, j: usize| -> f64 {
                // cofactor expansion, transposed for the inverse
                let (r1, r2) = match i {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let (c1, c2) = match j {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let m = a[r1 * 3 + c1] * a[r2 * 3 + c2] - a[r1 * 3 + c2] * a[r2 * 3 + c1];
                if (i + j) % 2 == 0 {
                    m
                } else {
                    -m
                }
            };
            let mut out = vec![0.0; 9];
            for i in 0..3 {
                for j in 0..3 {
                    out[i * 3 + j] = c(j, i) * inv_det;
                }
            }
            out
        }
        _ => return None,
    })
}

/// Number of negative eigenvalue signs of a small symmetric matrix, via the
/// characteristic polynomial sign pattern (n ≤ 3, Descartes on principal
/// minors through LDL-style pivots would also do; Jacobi is simplest here).
fn eigen_sign_count(a: &[f64], n: usize) -> usize {
    // symmetric Jacobi iteration, generous tolerance: only signs matter
    let mut m = a.to_vec();
    for _ in 0..50 {
        let mut p = 0;
        let mut q = 1;
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                if m[i * n + j].abs() > off {
                    off = m[i * n + j].abs();
                    p = i;
                    q = j;
                }
            }
        }
        if off < 1e-13 {
            break;
        }
        let app = m[p * n + p];
        let aqq = m[q * n + q];
        let apq = m[p * n + q];
        let theta = 0.5 * (aqq - app) / apq;
        let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
        let c = 1.0 / (t * t + 1.0).sqrt();
        let s = t * c;
        for k in 0..n {
            let mkp = m[k * n + p];
            let mkq = m[k * n + q];
            m[k * n + p] = c * mkp - s * mkq;
            m[k * n + q] = s * mkp + c * mkq;
        }
        for k in 0..n {
            let mpk = m[p * n + k];
            let mqk = m[q * n + k];
            m[p * n + k] = c * mpk - s * mqk;
            m[q * n + k] = s * mpk + c * mqk;
        }
    }
    (0..n).filter(|&i| m[i * n + i] < 0.0).count()
}

/// Source of the first metric derivatives feeding Christoffel assembly.
pub enum MetricDerivs<'a> {
    /// 2nd-order finite differences of the sampled metric.
    Fd,
    /// Exact per-node derivatives, laid out node-major as `[dir][i][j]`.
    Analytic(&'a [f64]),
}

/// Per-node Christoffel symbols Γ^k_{ij}, node-major `[k][i][j]`.
#[derive(Clone, Debug)]
pub struct Christoffel {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Christoffel {
    #[inline]
    pub fn at(&self, node: usize, k: usize, i: usize, j: usize) -> f64 {
        let n = self.n;
        self.data[((node * n + k) * n + i) * n + j]
    }
}

pub fn christoffel(
    grid: &ChartGrid,
    metric: &MetricField,
    derivs: MetricDerivs<'_>,
) -> Result<Christoffel> {
    let n = grid.dim();
    // dg[d][i][j] per node
    let dg: Vec<Vec<f64>> = match derivs {
        MetricDerivs::Fd => {
            let mut out = Vec::with_capacity(n * n * n);
            for d in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        out.push(grid.partial_strided(&metric.data, n * n, i * n + j, d));
                    }
                }
            }
            out
        }
        MetricDerivs::Analytic(raw) => {
            debug_assert_eq!(raw.len(), grid.len() * n * n * n);
            let mut out = vec![vec![0.0; grid.len()]; n * n * n];
            for node in grid.nodes() {
                for d in 0..n {
                    for i in 0..n {
                        for j in 0..n {
                            out[(d * n + i) * n + j][node] =
                                raw[((node * n + d) * n + i) * n + j];
                        }
                    }
                }
            }
            out
        }
    };
    let dgv = |node: usize, d: usize, i: usize, j: usize| dg[(d * n + i) * n + j][node];

    let mut data = vec![0.0; grid.len() * n * n * n];
    for node in grid.nodes() {
        let ginv = metric.inverse_at(node)?;
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += ginv[k * n + l]
                            * (dgv(node, i, j, l) + dgv(node, j, i, l) - dgv(node, l, i, j));
                    }
                    let v = 0.5 * s;
                    data[((node * n + k) * n + i) * n + j] = v;
                    data[((node * n + k) * n + j) * n + i] = v; // symmetric by assembly
                }
            }
        }
    }
    Ok(Christoffel { n, data })
}

/// Lowered curvature tensor `R(∂i,∂j,∂k,∂l)` per node, `[i][j][k][l]`.
#[derive(Clone, Debug)]
pub struct RiemannLowered {
    pub n: usize,
    pub data: Vec<f64>,
}

impl RiemannLowered {
    #[inline]
    pub fn at(&self, node: usize, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.data[(((node * n + i) * n + j) * n + k) * n + l]
    }
}

pub fn riemann(grid: &ChartGrid, metric: &MetricField, gamma: &Christoffel) -> RiemannLowered {
    let n = grid.dim();
    // dΓ[d][k][i][j]: finite differences of the (possibly exact) Christoffels
    let mut dgamma = Vec::with_capacity(n * n * n * n);
    for d in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    dgamma.push(grid.partial_strided(
                        &gamma.data,
                        n * n * n,
                        (k * n + i) * n + j,
                        d,
                    ));
                }
            }
        }
    }
    let dg = |node: usize, d: usize, k: usize, i: usize, j: usize| {
        dgamma[((d * n + k) * n + i) * n + j][node]
    };

    let mut data = vec![0.0; grid.len() * n * n * n * n];
    for node in grid.nodes() {
        let g = metric.at(node);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    // R(∂i,∂j)∂k = Σ_p up[p] ∂p
                    for p in 0..n {
                        let mut up = dg(node, i, p, j, k) - dg(node, j, p, i, k);
                        for m in 0..n {
                            up += gamma.at(node, p, i, m) * gamma.at(node, m, j, k)
                                - gamma.at(node, p, j, m) * gamma.at(node, m, i, k);
                        }
                        for l in 0..n {
                            data[(((node * n + i) * n + j) * n + k) * n + l] +=
                                up * g[p * n + l];
                        }
                    }
                }
            }
        }
    }
    RiemannLowered { n, data }
}

/// Per-node covector field (components along the coordinate differentials).
#[derive(Clone, Debug)]
pub struct OneFormField {
    pub n: usize,
    pub data: Vec<f64>,
}

impl OneFormField {
    pub fn zeros(grid: &ChartGrid) -> OneFormField {
        OneFormField {
            n: grid.dim(),
            data: vec![0.0; grid.len() * grid.dim()],
        }
    }

    #[inline]
    pub fn at(&self, node: usize, d: usize) -> f64 {
        self.data[node * self.n + d]
    }
}

/// Scalar 2-form sampled on coordinate pairs (see [`pair_list`]).
#[derive(Clone, Debug)]
pub struct ScalarTwoForm {
    pub n: usize,
    pub data: Vec<f64>,
}

impl ScalarTwoForm {
    #[inline]
    pub fn at(&self, node: usize, pair: usize) -> f64 {
        self.data[node * pair_list(self.n).len() + pair]
    }
}

pub fn exterior_d(grid: &ChartGrid, form: &OneFormField) -> ScalarTwoForm {
    let n = grid.dim();
    let pairs = pair_list(n);
    let mut partials = Vec::with_capacity(n * n); // d then component
    for d in 0..n {
        for c in 0..n {
            partials.push(grid.partial_strided(&form.data, n, c, d));
        }
    }
    let mut data = vec![0.0; grid.len() * pairs.len()];
    for node in grid.nodes() {
        for (pi, &(d, e)) in pairs.iter().enumerate() {
            data[node * pairs.len() + pi] = partials[d * n + e][node] - partials[e * n + d][node];
        }
    }
    ScalarTwoForm { n, data }
}

/// Per-node, per-direction (n+2)×(n+2) matrices: Ω, 𝐗, Υ live here.
#[derive(Clone, Debug)]
pub struct MatrixOneForm {
    /// chart dimension
    pub n: usize,
    /// matrix dimension (n+2)
    pub m: usize,
    pub data: Vec<f64>,
}

impl MatrixOneForm {
    pub fn zeros(grid: &ChartGrid, m: usize) -> MatrixOneForm {
        MatrixOneForm {
            n: grid.dim(),
            m,
            data: vec![0.0; grid.len() * grid.dim() * m * m],
        }
    }

    #[inline]
    pub fn block(&self, node: usize, d: usize) -> &[f64] {
        let s = self.m * self.m;
        let base = (node * self.n + d) * s;
        &self.data[base..base + s]
    }

    #[inline]
    pub fn block_mut(&mut self, node: usize, d: usize) -> &mut [f64] {
        let s = self.m * self.m;
        let base = (node * self.n + d) * s;
        &mut self.data[base..base + s]
    }

    #[inline]
    pub fn at(&self, node: usize, d: usize, a: usize, b: usize) -> f64 {
        self.block(node, d)[a * self.m + b]
    }

    /// Max-norm of `MᵀG_amb + G_amb M` over all nodes and directions.
    pub fn g_skew_residual(&self, g_amb: &[f64]) -> f64 {
        let m = self.m;
        let mut worst = 0.0f64;
        for chunk in self.data.chunks_exact(m * m) {
            for a in 0..m {
                for b in 0..m {
                    worst = worst
                        .max((chunk[b * m + a] * g_amb[b] + g_amb[a] * chunk[a * m + b]).abs());
                }
            }
        }
        worst
    }
}

/// Matrix-valued 2-form on coordinate pairs.
#[derive(Clone, Debug)]
pub struct MatrixTwoForm {
    pub n: usize,
    pub m: usize,
    pub data: Vec<f64>,
}

impl MatrixTwoForm {
    pub fn zeros(grid: &ChartGrid, m: usize) -> MatrixTwoForm {
        MatrixTwoForm {
            n: grid.dim(),
            m,
            data: vec![0.0; grid.len() * pair_list(grid.dim()).len() * m * m],
        }
    }

    #[inline]
    pub fn block(&self, node: usize, pair: usize) -> &[f64] {
        let s = self.m * self.m;
        let base = (node * pair_list(self.n).len() + pair) * s;
        &self.data[base..base + s]
    }

    #[inline]
    pub fn block_mut(&mut self, node: usize, pair: usize) -> &mut [f64] {
        let s = self.m * self.m;
        let base = (node * pair_list(self.n).len() + pair) * s;
        &mut self.data[base..base + s]
    }
}

/// `(dω)(∂d,∂e) = ∂_d ω_e − ∂_e ω_d`, componentwise on the matrix entries.
pub fn exterior_d_matrix(grid: &ChartGrid, form: &MatrixOneForm) -> MatrixTwoForm {
    let n = grid.dim();
    let m = form.m;
    let mm = m * m;
    let pairs = pair_list(n);
    let mut out = MatrixTwoForm::zeros(grid, m);
    for (pi, &(d, e)) in pairs.iter().enumerate() {
        for c in 0..mm {
            let dd = grid.partial_strided(&form.data, n * mm, e * mm + c, d);
            let de = grid.partial_strided(&form.data, n * mm, d * mm + c, e);
            for node in grid.nodes() {
                out.data[(node * pairs.len() + pi) * mm + c] = dd[node] - de[node];
            }
        }
    }
    out
}

/// `(A∧B)(X,Y) = A(X)·B(Y) − A(Y)·B(X)` with matrix products.
pub fn wedge(grid: &ChartGrid, a: &MatrixOneForm, b: &MatrixOneForm) -> Result<MatrixTwoForm> {
    if a.m != b.m || a.n != b.n {
        return Err(Error::ShapeMismatch(format!(
            "wedge of incompatible forms: ({}, {}) vs ({}, {})",
            a.n, a.m, b.n, b.m
        )));
    }
    let m = a.m;
    let pairs = pair_list(a.n);
    let mut out = MatrixTwoForm::zeros(grid, m);
    let mut scratch = vec![0.0; m * m];
    for node in grid.nodes() {
        for (pi, &(d, e)) in pairs.iter().enumerate() {
            let ad = a.block(node, d);
            let ae = a.block(node, e);
            let bd = b.block(node, d);
            let be = b.block(node, e);
            scratch.iter_mut().for_each(|x| *x = 0.0);
            for i in 0..m {
                for k in 0..m {
                    let adik = ad[i * m + k];
                    let aeik = ae[i * m + k];
                    if adik == 0.0 && aeik == 0.0 {
                        continue;
                    }
                    for j in 0..m {
                        scratch[i * m + j] += adik * be[k * m + j] - aeik * bd[k * m + j];
                    }
                }
            }
            out.block_mut(node, pi).copy_from_slice(&scratch);
        }
    }
    Ok(out)
}
