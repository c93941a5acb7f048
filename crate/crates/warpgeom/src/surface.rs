//! Chart-sampled hypersurface data: the input bundle every check and the
//! whole reconstruction pipeline operate on.

use crate::ambient::SignatureData;
use crate::calculus::MetricField;
use crate::error::{Error, Result};
use crate::grid::ChartGrid;
use crate::jet::Jet2;
use crate::scalar_field::ScalarField1D;

/// Per-node orthonormal tangent frame: n vectors with n chart components,
/// node-major `[i][q]` (frame index, then coordinate component).
#[derive(Clone, Debug)]
pub struct FrameField {
    pub n: usize,
    pub data: Vec<f64>,
}

impl FrameField {
    pub fn zeros(grid: &ChartGrid) -> FrameField {
        let n = grid.dim();
        FrameField {
            n,
            data: vec![0.0; grid.len() * n * n],
        }
    }

    /// Chart components of frame vector `i` at `node`.
    #[inline]
    pub fn vector(&self, node: usize, i: usize) -> &[f64] {
        let n = self.n;
        &self.data[(node * n + i) * n..(node * n + i + 1) * n]
    }

    #[inline]
    pub fn vector_mut(&mut self, node: usize, i: usize) -> &mut [f64] {
        let n = self.n;
        &mut self.data[(node * n + i) * n..(node * n + i + 1) * n]
    }
}

/// Per-node n×n matrix expressed in the frame basis (`A e_j = Σ_i M_ij e_i`).
#[derive(Clone, Debug)]
pub struct FrameMatrixField {
    pub n: usize,
    pub data: Vec<f64>,
}

impl FrameMatrixField {
    pub fn zeros(grid: &ChartGrid) -> FrameMatrixField {
        let n = grid.dim();
        FrameMatrixField {
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
}

/// Exact first derivatives of the metric and frame fields, available when
/// the data comes from closed-form expressions. With these present the
/// connection-form assembly is pure algebra and golden-form comparisons are
/// free of finite-difference error.
#[derive(Clone, Debug)]
pub struct AnalyticDerivs {
    /// `∂_d g_{pq}` per node, layout `[d][p][q]`
    pub metric_d1: Vec<f64>,
    /// `∂_d e_i^q` per node, layout `[d][i][q]`
    pub frame_d1: Vec<f64>,
}

/// Optional fields for the ρ-based reformulation of the structure theorem.
#[derive(Clone, Debug)]
pub struct RhoFields {
    pub rho: Vec<f64>,
    pub rho_t: Vec<f64>,
    pub rho_b: Vec<f64>,
}

/// Chart grid plus per-node metric, frame, shape tensor A (frame basis),
/// tangent components of T, the normal component `T_{n+1}`, and the height
/// function π, together with the scenario signs and warping function.
#[derive(Clone, Debug)]
pub struct HypersurfaceData {
    pub grid: ChartGrid,
    pub signs: SignatureData,
    pub metric: MetricField,
    pub frame: FrameField,
    /// shape operator A in the frame basis
    pub shape: FrameMatrixField,
    /// T_i = ⟨e_i, T⟩ per node
    pub t_frame: Vec<f64>,
    /// T_{n+1} per node
    pub t_normal: Vec<f64>,
    /// π per node
    pub pi: Vec<f64>,
    pub warp: ScalarField1D,
    pub analytic: Option<AnalyticDerivs>,
    pub rho: Option<RhoFields>,
}

impl HypersurfaceData {
    pub fn n(&self) -> usize {
        self.grid.dim()
    }

    /// Ambient matrix dimension n+2.
    pub fn m(&self) -> usize {
        self.grid.dim() + 2
    }

    #[inline]
    pub fn t_at(&self, node: usize) -> &[f64] {
        let n = self.n();
        &self.t_frame[node * n..(node + 1) * n]
    }

    /// Warp jet `(a, a′, a″)` evaluated at π(node).
    pub fn warp_jet(&self, node: usize) -> Result<Jet2> {
        self.warp.eval_jet(self.pi[node])
    }

    /// Chart components of the vector field `T = Σ_k ε_k T_k e_k` at `node`.
    pub fn t_coords(&self, node: usize) -> Vec<f64> {
        let n = self.n();
        let mut out = vec![0.0; n];
        for k in 0..n {
            let s = self.signs.tangent_sign(k + 1) * self.t_frame[node * n + k];
            let e = self.frame.vector(node, k);
            for q in 0..n {
                out[q] += s * e[q];
            }
        }
        out
    }

    /// η(∂_d) = g(∂_d, T) for all chart directions at `node`.
    pub fn eta_coords(&self, node: usize) -> Vec<f64> {
        let n = self.n();
        let g = self.metric.at(node);
        let t = self.t_coords(node);
        (0..n)
            .map(|d| (0..n).map(|q| g[d * n + q] * t[q]).sum())
            .collect()
    }

    /// g(e_i, ∂_d) at `node`, i.e. the matrix pairing frame vectors with
    /// coordinate directions.
    pub fn frame_metric_pairing(&self, node: usize) -> Vec<f64> {
        let n = self.n();
        let g = self.metric.at(node);
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            let e = self.frame.vector(node, i);
            for d in 0..n {
                let mut s = 0.0;
                for q in 0..n {
                    s += g[d * n + q] * e[q];
                }
                out[i * n + d] = s;
            }
        }
        out
    }

    /// A expressed on coordinate vectors: `A_coord = E · A_frame · E⁻¹`
    /// where the columns of E are the frame vectors in chart components.
    pub fn shape_coords(&self, node: usize) -> Result<Vec<f64>> {
        let n = self.n();
        let mut e = vec![0.0; n * n]; // E[q][i] = e_i^q
        for i in 0..n {
            let v = self.frame.vector(node, i);
            for q in 0..n {
                e[q * n + i] = v[q];
            }
        }
        let einv = crate::calculus::invert_small(&e, n).ok_or_else(|| {
            Error::Data(format!("frame degenerate at node {node}"))
        })?;
        let af = self.shape.at(node);
        // E · A_f · E⁻¹
        let mut tmp = vec![0.0; n * n];
        for q in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for i in 0..n {
                    s += e[q * n + i] * af[i * n + j];
                }
                tmp[q * n + j] = s;
            }
        }
        let mut out = vec![0.0; n * n];
        for q in 0..n {
            for p in 0..n {
                let mut s = 0.0;
                for j in 0..n {
                    s += tmp[q * n + j] * einv[j * n + p];
                }
                out[q * n + p] = s;
            }
        }
        Ok(out)
    }

    /// Frame components `ω_k(v) = ε_k g(e_k, v)` of a chart vector at `node`.
    pub fn to_frame_components(&self, node: usize, v: &[f64]) -> Vec<f64> {
        let n = self.n();
        let g = self.metric.at(node);
        (0..n)
            .map(|k| {
                let e = self.frame.vector(node, k);
                let mut s = 0.0;
                for p in 0..n {
                    for q in 0..n {
                        s += g[p * n + q] * e[p] * v[q];
                    }
                }
                self.signs.tangent_sign(k + 1) * s
            })
            .collect()
    }

    /// Frame orthonormality, π inside the warp domain, finiteness, metric
    /// invariants, and the sign consistency n = chart dimension.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.signs.n != n {
            return Err(Error::Data(format!(
                "sign data is for n = {}, grid has dimension {n}",
                self.signs.n
            )));
        }
        self.metric.validate(&self.grid)?;
        let expect = self.grid.len();
        for (name, len, per) in [
            ("frame", self.frame.data.len(), n * n),
            ("shape", self.shape.data.len(), n * n),
            ("t_frame", self.t_frame.len(), n),
            ("t_normal", self.t_normal.len(), 1),
            ("pi", self.pi.len(), 1),
        ] {
            if len != expect * per {
                return Err(Error::Data(format!(
                    "field `{name}` has wrong length {len}, expected {}",
                    expect * per
                )));
            }
        }
        for node in self.grid.nodes() {
            let g = self.metric.at(node);
            for i in 0..n {
                let ei = self.frame.vector(node, i);
                for j in i..n {
                    let ej = self.frame.vector(node, j);
                    let mut ip = 0.0;
                    for p in 0..n {
                        for q in 0..n {
                            ip += g[p * n + q] * ei[p] * ej[q];
                        }
                    }
                    let target = if i == j {
                        self.signs.tangent_sign(i + 1)
                    } else {
                        0.0
                    };
                    if (ip - target).abs() > 1e-10 {
                        return Err(Error::Data(format!(
                            "frame not orthonormal at node {node}: ⟨e{i},e{j}⟩ = {ip}, expected {target}"
                        )));
                    }
                }
            }
            let p = self.pi[node];
            if !p.is_finite() {
                return Err(Error::NonFinite {
                    context: format!("π at node {node}"),
                });
            }
            let (lo, hi) = self.warp.domain;
            let slack = 1e-9 * (hi - lo).max(1.0);
            if p < lo - slack || p > hi + slack {
                return Err(Error::OutsideDomain {
                    name: "pi".into(),
                    value: p,
                    min: lo,
                    max: hi,
                });
            }
        }
        if self
            .t_frame
            .iter()
            .chain(&self.t_normal)
            .chain(&self.shape.data)
            .any(|x| !x.is_finite())
        {
            return Err(Error::NonFinite {
                context: "hypersurface fields".into(),
            });
        }
        Ok(())
    }
}
