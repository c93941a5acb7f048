//! Frame-equation integration `B⁻¹dB = Υ` in the pseudo-orthogonal group,
//! the immersion map χ, and the verification report for every conclusion of
//! the structure theorem.
//!
//! Stepping is edge-midpoint exponential: `B ← B · exp(Ῡ)` with Ῡ the
//! average of the two endpoint samples contracted with the edge
//! displacement. The exponential of a g-skew matrix stays in the group to
//! rounding, so group drift measures accumulated rounding, not truncation;
//! rows are re-projected by G-Gram-Schmidt every `projection_interval`
//! edges with the T-row re-pinned to the local values.

use crate::error::{Error, Result};
use crate::frames::FrameFormBundle;
use crate::grid::ChartGrid;
use crate::linalg::SqMat;
use crate::surface::HypersurfaceData;

/// A frame-group element (member of `{B : BᵀGB = G}`).
#[derive(Clone, Debug)]
pub struct FrameElement {
    pub b: SqMat,
}

impl FrameElement {
    pub fn group_residual(&self, g: &[f64]) -> f64 {
        self.b.group_residual(g)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct IntegrateOptions {
    /// re-projection period in edges
    pub projection_interval: usize,
    /// hard error when pre-projection drift exceeds this (signals non-flat Υ)
    pub drift_limit: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            projection_interval: 16,
            drift_limit: 1e-3,
        }
    }
}

/// Build an admissible initial frame at `node`: row n+1 equals
/// `(T_0, …, T_{n+1})` there, the remaining rows are completed by G-weighted
/// Gram-Schmidt over standard-basis seeds taken in index order (seeds whose
/// residual G-norm is degenerate or of the wrong sign are skipped), and a
/// free row is negated at the end if needed so that `det B = +1`.
pub fn initial_frame(data: &HypersurfaceData, node: usize) -> Result<FrameElement> {
    let n = data.n();
    let m = n + 2;
    let g = data.signs.g_amb();
    let mut t_row = vec![0.0; m];
    for k in 0..n {
        t_row[1 + k] = data.t_frame[node * n + k];
    }
    t_row[n + 1] = data.t_normal[node];
    let dot = |x: &[f64], y: &[f64]| -> f64 {
        x.iter().zip(y).zip(g).map(|((a, b), s)| s * a * b).sum()
    };
    let tn = dot(&t_row, &t_row);
    if (tn - data.signs.epsilon).abs() > 1e-8 {
        return Err(Error::RowConstraint(format!(
            "Σ ε_γ T_γ² = {tn} but ε = {}; condition (B) fails at node {node}",
            data.signs.epsilon
        )));
    }
    if data.signs.eps_normal() != data.signs.epsilon {
        return Err(Error::RowConstraint(
            "initial frame needs ε_{n+1} = ε".into(),
        ));
    }

    let mut rows: Vec<Vec<f64>> = vec![vec![0.0; m]; m];
    rows[m - 1] = t_row;
    // normalize the pinned row exactly
    let scale = 1.0 / dot(&rows[m - 1].clone(), &rows[m - 1]).abs().sqrt();
    rows[m - 1].iter_mut().for_each(|v| *v *= scale);

    let mut used = vec![false; m];
    for i in 0..m - 1 {
        let mut placed = false;
        for seed in 0..m {
            if used[seed] {
                continue;
            }
            let mut cand = vec![0.0; m];
            cand[seed] = 1.0;
            // orthogonalize against the pinned row and rows already built
            for k in (0..i).chain(std::iter::once(m - 1)) {
                let c = dot(&cand, &rows[k]) * g_sign(dot(&rows[k], &rows[k]));
                for j in 0..m {
                    cand[j] -= c * rows[k][j];
                }
            }
            let nn = dot(&cand, &cand);
            if nn.abs() < 1e-8 || nn.signum() != g[i].signum() {
                continue;
            }
            let inv = 1.0 / nn.abs().sqrt();
            cand.iter_mut().for_each(|v| *v *= inv);
            rows[i] = cand;
            used[seed] = true;
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::FrameCompletion(format!(
                "no admissible seed for row {i} (G-norm target {})",
                g[i]
            )));
        }
    }
    let mut b = SqMat::from_rows(&rows);
    if b.det() < 0.0 {
        // negating a free row keeps BᵀGB = G and the pinned T-row while
        // flipping the determinant sign
        for j in 0..m {
            let v = b.at(0, j);
            b.set(0, j, -v);
        }
    }
    Ok(FrameElement { b })
}

fn g_sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DriftStats {
    /// worst ‖BᵀGB − G‖_max seen immediately before a re-projection
    pub max_pre_projection: f64,
    pub projections: usize,
    pub edges: usize,
}

/// Integrate Υ along a chain of grid-adjacent nodes starting from `b0` at
/// `path[0]`; returns the endpoint frame and drift statistics.
pub fn integrate_frame(
    grid: &ChartGrid,
    bundle: &FrameFormBundle,
    data: &HypersurfaceData,
    b0: &FrameElement,
    path: &[usize],
    opts: IntegrateOptions,
) -> Result<(FrameElement, DriftStats)> {
    let mut walker = Walker::new(grid, bundle, data, b0.clone(), path[0], opts)?;
    for w in path.windows(2) {
        walker.step(w[0], w[1])?;
    }
    Ok(walker.finish())
}

struct Walker<'a> {
    grid: &'a ChartGrid,
    bundle: &'a FrameFormBundle,
    data: &'a HypersurfaceData,
    b: SqMat,
    opts: IntegrateOptions,
    since_projection: usize,
    stats: DriftStats,
    m: usize,
}

impl<'a> Walker<'a> {
    fn new(
        grid: &'a ChartGrid,
        bundle: &'a FrameFormBundle,
        data: &'a HypersurfaceData,
        b0: FrameElement,
        start: usize,
        opts: IntegrateOptions,
    ) -> Result<Walker<'a>> {
        let m = bundle.upsilon.m;
        let g = data.signs.g_amb();
        let res = b0.b.group_residual(g);
        if res > 1e-6 {
            return Err(Error::RowConstraint(format!(
                "initial frame is not in the group: ‖BᵀGB − G‖ = {res:.3e}"
            )));
        }
        let _ = start;
        Ok(Walker {
            grid,
            bundle,
            data,
            b: b0.b,
            opts,
            since_projection: 0,
            stats: DriftStats::default(),
            m,
        })
    }

    fn step(&mut self, from: usize, to: usize) -> Result<()> {
        let m = self.m;
        let n = self.grid.dim();
        // identify the axis and signed displacement of the edge
        let mut axis = usize::MAX;
        let mut step = 0isize;
        for d in 0..n {
            let a = self.grid.axis_pos(from, d) as isize;
            let b = self.grid.axis_pos(to, d) as isize;
            if a != b {
                if (a - b).abs() != 1 || axis != usize::MAX {
                    return Err(Error::Data(format!(
                        "path nodes {from} -> {to} are not grid-adjacent"
                    )));
                }
                axis = d;
                step = b - a;
            }
        }
        if axis == usize::MAX {
            return Ok(()); // repeated node
        }
        let h = self.grid.spacing(axis) * step as f64;
        let mut gen = SqMat::zeros(m);
        let blk_from = self.bundle.upsilon.block(from, axis);
        let blk_to = self.bundle.upsilon.block(to, axis);
        for c in 0..m * m {
            let v = 0.5 * (blk_from[c] + blk_to[c]) * h;
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    context: format!("Υ sample on edge {from} -> {to}"),
                });
            }
            gen.a[c] = v;
        }
        self.b = self.b.mul(&gen.expm());
        self.since_projection += 1;
        self.stats.edges += 1;
        if self.since_projection >= self.opts.projection_interval {
            self.project(to)?;
        }
        Ok(())
    }

    fn project(&mut self, node: usize) -> Result<()> {
        let g = self.data.signs.g_amb();
        let drift = self.b.group_residual(g);
        self.stats.max_pre_projection = self.stats.max_pre_projection.max(drift);
        if drift > self.opts.drift_limit {
            return Err(Error::GroupDrift {
                drift,
                limit: self.opts.drift_limit,
            });
        }
        let m = self.m;
        let n = self.grid.dim();
        // re-pin the T-row to the local values while projecting
        let mut pinned = vec![0.0; m];
        for k in 0..n {
            pinned[1 + k] = self.data.t_frame[node * n + k];
        }
        pinned[n + 1] = self.data.t_normal[node];
        self.b.g_gram_schmidt_rows(g, &pinned)?;
        self.since_projection = 0;
        self.stats.projections += 1;
        Ok(())
    }

    fn finish(self) -> (FrameElement, DriftStats) {
        let mut stats = self.stats;
        stats.max_pre_projection = stats
            .max_pre_projection
            .max(self.b.group_residual(self.data.signs.g_amb()));
        (FrameElement { b: self.b }, stats)
    }
}

/// Monotone staircase path between two nodes, walking `first_axis` fully
/// before the others.
pub fn staircase_path(grid: &ChartGrid, from: usize, to: usize, first_axis: usize) -> Vec<usize> {
    let n = grid.dim();
    let mut order: Vec<usize> = vec![first_axis];
    for d in 0..n {
        if d != first_axis {
            order.push(d);
        }
    }
    let mut path = vec![from];
    let mut cur = grid.multi(from);
    let target = grid.multi(to);
    for &d in &order {
        while cur[d] != target[d] {
            if cur[d] < target[d] {
                cur[d] += 1;
            } else {
                cur[d] -= 1;
            }
            path.push(grid.index(&cur));
        }
    }
    path
}

#[derive(Clone, Debug)]
pub struct FrameFieldResult {
    /// per-node B, node-major m×m
    pub b: Vec<f64>,
    pub stats: DriftStats,
    pub origin: usize,
}

/// Integrate over the whole grid by the fixed sweep: along axis 0 through
/// the origin, then along axis 1 from every reached node, then axis 2.
pub fn integrate_field(
    grid: &ChartGrid,
    bundle: &FrameFormBundle,
    data: &HypersurfaceData,
    b0: &FrameElement,
    origin: usize,
    opts: IntegrateOptions,
) -> Result<FrameFieldResult> {
    let m = bundle.upsilon.m;
    let mut field = vec![0.0; grid.len() * m * m];
    let mut stats = DriftStats::default();
    let store = |field: &mut Vec<f64>, node: usize, b: &SqMat| {
        field[node * m * m..(node + 1) * m * m].copy_from_slice(&b.a);
    };

    let sweep_line =
        |start: usize,
         axis: usize,
         b_start: &SqMat,
         field: &mut Vec<f64>,
         stats: &mut DriftStats|
         -> Result<()> {
            let count = grid.axes()[axis].count;
            let pos = grid.axis_pos(start, axis);
            for dir in [1isize, -1] {
                let mut walker = Walker::new(
                    grid,
                    bundle,
                    data,
                    FrameElement { b: b_start.clone() },
                    start,
                    opts,
                )?;
                let mut cur = start;
                loop {
                    let next_pos = walker_pos(pos, cur, grid, axis, dir);
                    if next_pos.is_none() {
                        break;
                    }
                    let next = next_pos.unwrap();
                    walker.step(cur, next)?;
                    store(field, next, &walker.b);
                    cur = next;
                    if (dir > 0 && grid.axis_pos(cur, axis) == count - 1)
                        || (dir < 0 && grid.axis_pos(cur, axis) == 0)
                    {
                        break;
                    }
                }
                let (_, s) = walker.finish();
                stats.max_pre_projection = stats.max_pre_projection.max(s.max_pre_projection);
                stats.projections += s.projections;
                stats.edges += s.edges;
            }
            Ok(())
        };

    store(&mut field, origin, &b0.b);
    sweep_line(origin, 0, &b0.b, &mut field, &mut stats)?;
    // axis 1 columns from every node of the axis-0 line through the origin
    let n = grid.dim();
    let origin_multi = grid.multi(origin);
    for i0 in 0..grid.axes()[0].count {
        let mut mi = origin_multi.clone();
        mi[0] = i0;
        let start = grid.index(&mi);
        let b_start = SqMat {
            n: m,
            a: field[start * m * m..(start + 1) * m * m].to_vec(),
        };
        sweep_line(start, 1, &b_start, &mut field, &mut stats)?;
        if n == 3 {
            for i1 in 0..grid.axes()[1].count {
                let mut mj = mi.clone();
                mj[1] = i1;
                let s2 = grid.index(&mj);
                let b2 = SqMat {
                    n: m,
                    a: field[s2 * m * m..(s2 + 1) * m * m].to_vec(),
                };
                sweep_line(s2, 2, &b2, &mut field, &mut stats)?;
            }
        }
    }
    Ok(FrameFieldResult {
        b: field,
        stats,
        origin,
    })
}

fn walker_pos(
    _start_pos: usize,
    cur: usize,
    grid: &ChartGrid,
    axis: usize,
    dir: isize,
) -> Option<usize> {
    grid.neighbor(cur, axis, dir)
}

/// The reconstructed immersion: per-node χ, the unit normal, and the frame
/// field, with the quadric membership residual.
#[derive(Clone, Debug)]
pub struct ImmersionSample {
    /// per node: n+2 coordinates (fiber coords 0..=n, then t)
    pub chi: Vec<f64>,
    /// per node: ambient coordinates of e_{n+1}
    pub normal: Vec<f64>,
    /// per node m×m frame
    pub b: Vec<f64>,
    pub quadric_max: f64,
}

/// `χ_0 = ε_0 B_00, χ_i = ε_i B_i0, χ_{n+1} = π`; the normal is
/// `e_{n+1} = Σ_α ε_α B_{α,n+1} Ē_α` written in ambient coordinates
/// (spatial components divided by a, ∂t component as-is).
pub fn build_chi(
    data: &HypersurfaceData,
    bfield: &[f64],
    tau_quad: f64,
) -> Result<ImmersionSample> {
    let grid = &data.grid;
    let n = data.n();
    let m = n + 2;
    let mut chi = vec![0.0; grid.len() * m];
    let mut normal = vec![0.0; grid.len() * m];
    let mut quadric_max = 0.0f64;
    for node in grid.nodes() {
        let b = &bfield[node * m * m..(node + 1) * m * m];
        let a = data.warp_jet(node)?.v;
        let mut q = 0.0;
        for alpha in 0..=n {
            let v = data.signs.eps[alpha] * b[alpha * m];
            chi[node * m + alpha] = v;
            q += data.signs.eps[alpha] * v * v;
        }
        chi[node * m + n + 1] = data.pi[node];
        quadric_max = quadric_max.max((q - data.signs.c).abs());
        // e_{n+1} = Σ_α ε_α B_{α,n+1} Ē_α with Ē_α = x̂_α / a spatially
        for alpha in 0..=n {
            normal[node * m + alpha] = data.signs.eps[alpha] * b[alpha * m + (n + 1)] / a;
        }
        normal[node * m + n + 1] = data.signs.eps[n + 1] * b[(n + 1) * m + (n + 1)];
    }
    if quadric_max > tau_quad {
        return Err(Error::QuadricViolation {
            residual: quadric_max,
            tol: tau_quad,
        });
    }
    Ok(ImmersionSample {
        chi,
        normal,
        b: bfield.to_vec(),
        quadric_max,
    })
}

#[derive(Clone, Debug)]
pub struct ImmersionReport {
    /// max |⟨dχ(e_i),dχ(e_j)⟩ − ε_i δ_ij| over interior nodes
    pub isometry_max: f64,
    /// max component residual of ∂t = T + ε_{n+1} T_{n+1} e_{n+1}
    pub dt_decomposition_max: f64,
    /// max |⟨∇̃_{dχ(e_i)}dχ(e_j), e_{n+1}⟩ − ⟨e_j, A e_i⟩|
    pub shape_recovery_max: f64,
    pub quadric_max: f64,
    /// per-node isometry residual field
    pub isometry_field: Vec<f64>,
}

/// Verify the reconstruction against the data it came from. χ is
/// differentiated with 4th-order stencils: the quantities being certified
/// are 2nd-order accurate, so the verifier's own differentiation error must
/// sit well below them.
pub fn verify_immersion(
    data: &HypersurfaceData,
    sample: &ImmersionSample,
) -> Result<ImmersionReport> {
    let grid = &data.grid;
    let n = data.n();
    let m = n + 2;
    // ∂_d χ^α (4th order)
    let mut dchi = vec![Vec::new(); n * m];
    for d in 0..n {
        for alpha in 0..m {
            dchi[d * m + alpha] = grid.partial4_strided(&sample.chi, m, alpha, d);
        }
    }
    let margin = 2usize;
    let interior = grid.interior_nodes(margin);
    let mut isometry_field = vec![0.0; grid.len()];
    let mut isometry_max = 0.0f64;
    let mut dt_max = 0.0f64;
    let mut shape_max = 0.0f64;

    // second derivatives of χ for the shape recovery: single pure-central
    // 4th-order stencils (chained first differences would leak one-sided
    // boundary values into the interior at order 1)
    let mut ddchi = vec![Vec::new(); n * n * m];
    for d in 0..n {
        for e in 0..n {
            for alpha in 0..m {
                ddchi[(d * n + e) * m + alpha] =
                    grid.second4_strided(&sample.chi, m, alpha, d, e);
            }
        }
    }

    for node in grid.nodes() {
        let a_jet = data.warp_jet(node)?;
        let a = a_jet.v;
        let da = a_jet.d1;
        let eps = data.signs.epsilon;
        // dχ(e_i) in ambient coordinates
        let mut dchi_e = vec![0.0; n * m];
        for i in 0..n {
            let ei = data.frame.vector(node, i);
            for alpha in 0..m {
                let mut s = 0.0;
                for d in 0..n {
                    s += ei[d] * dchi[d * m + alpha][node];
                }
                dchi_e[i * m + alpha] = s;
            }
        }
        let amb_dot = |v: &[f64], w: &[f64]| -> f64 {
            let mut s = 0.0;
            for alpha in 0..=n {
                s += data.signs.eps[alpha] * v[alpha] * w[alpha];
            }
            a * a * s + eps * v[n + 1] * w[n + 1]
        };
        // isometry
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let ip = amb_dot(&dchi_e[i * m..(i + 1) * m], &dchi_e[j * m..(j + 1) * m]);
                let target = if i == j {
                    data.signs.tangent_sign(i + 1)
                } else {
                    0.0
                };
                worst = worst.max((ip - target).abs());
            }
        }
        isometry_field[node] = worst;
        if !grid.is_interior(node, margin) {
            continue;
        }
        isometry_max = isometry_max.max(worst);

        // ∂t decomposition: ∂t − Σ_k ε_k T_k dχ(e_k) − ε_{n+1} T_{n+1} e_{n+1}
        let t = data.t_at(node);
        let tn = data.t_normal[node];
        let en = data.signs.eps_normal();
        for alpha in 0..m {
            let mut v = if alpha == n + 1 { 1.0 } else { 0.0 };
            for k in 0..n {
                v -= data.signs.tangent_sign(k + 1) * t[k] * dchi_e[k * m + alpha];
            }
            v -= en * tn * sample.normal[node * m + alpha];
            dt_max = dt_max.max(v.abs());
        }

        // shape recovery: ⟨∇̃_{dχ(e_i)} dχ(e_j), e_{n+1}⟩ = ⟨e_j, A e_i⟩
        let normal = &sample.normal[node * m..(node + 1) * m];
        let af = data.shape.at(node);
        for i in 0..n {
            let ei = data.frame.vector(node, i);
            for j in 0..n {
                // directional derivative of the ambient field dχ(e_j)∘chart
                // along e_i: Σ_d e_i^d ∂_d (dχ(... e_j ...)): assemble from
                // ddchi and the derivative of e_j's chart components (FD on
                // the frame field or analytic when available)
                let mut dd = vec![0.0; m];
                for alpha in 0..m {
                    let mut s = 0.0;
                    for d in 0..n {
                        let mut inner = 0.0;
                        // ∂_d (Σ_e e_j^e ∂_e χ^α) = Σ_e (∂_d e_j^e) ∂_e χ^α
                        //                          + Σ_e e_j^e ∂_d∂_e χ^α
                        let ej = data.frame.vector(node, j);
                        for e in 0..n {
                            inner += ej[e] * ddchi[(d * n + e) * m + alpha][node];
                        }
                        inner += frame_jacobian_term(data, node, d, j, alpha, &dchi);
                        s += ei[d] * inner;
                    }
                    dd[alpha] = s;
                }
                // warped-product connection correction terms
                let v = &dchi_e[i * m..(i + 1) * m];
                let w = &dchi_e[j * m..(j + 1) * m];
                let mut cov = vec![0.0; m];
                let mut spatial_ip = 0.0;
                for alpha in 0..=n {
                    spatial_ip += data.signs.eps[alpha] * v[alpha] * w[alpha];
                }
                for alpha in 0..=n {
                    cov[alpha] = dd[alpha] + (da / a) * (v[n + 1] * w[alpha] + v[alpha] * w[n + 1]);
                }
                cov[n + 1] = dd[n + 1] - eps * a * da * spatial_ip;
                let lhs = amb_dot(&cov, normal);
                // ⟨e_j, A e_i⟩ = ε_j (A_f)_{ji}
                let rhs = data.signs.tangent_sign(j + 1) * af[j * n + i];
                shape_max = shape_max.max((lhs - rhs).abs());
            }
        }
    }
    let _ = interior;
    Ok(ImmersionReport {
        isometry_max,
        dt_decomposition_max: dt_max,
        shape_recovery_max: shape_max,
        quadric_max: sample.quadric_max,
        isometry_field,
    })
}

fn frame_jacobian_term(
    data: &HypersurfaceData,
    node: usize,
    d: usize,
    j: usize,
    alpha: usize,
    dchi: &[Vec<f64>],
) -> f64 {
    let n = data.n();
    let m = n + 2;
    match &data.analytic {
        Some(a) => {
            let mut s = 0.0;
            for e in 0..n {
                s += a.frame_d1[((node * n + d) * n + j) * n + e] * dchi[e * m + alpha][node];
            }
            s
        }
        None => {
            // FD of the frame components: cheap 2nd-order central fallback
            let grid = &data.grid;
            let h = grid.spacing(d);
            let up = grid.neighbor(node, d, 1);
            let dn = grid.neighbor(node, d, -1);
            let mut s = 0.0;
            for e in 0..n {
                let dv = match (up, dn) {
                    (Some(u), Some(l)) => {
                        (data.frame.vector(u, j)[e] - data.frame.vector(l, j)[e]) / (2.0 * h)
                    }
                    (Some(u), None) => {
                        (data.frame.vector(u, j)[e] - data.frame.vector(node, j)[e]) / h
                    }
                    (None, Some(l)) => {
                        (data.frame.vector(node, j)[e] - data.frame.vector(l, j)[e]) / h
                    }
                    (None, None) => 0.0,
                };
                s += dv * dchi[e * m + alpha][node];
            }
            s
        }
    }
}

/// Classification of the η-structure of the data.
#[derive(Clone, Debug, PartialEq)]
pub enum LeafStructure {
    /// η ≡ 0: the image is a slice {t₀} × M
    Slice,
    /// η ≠ 0 everywhere: the π-level sets foliate the chart
    Foliated {
        /// π-bin label per node
        labels: Vec<usize>,
    },
    /// η vanishes on part of the chart
    Mixed {
        /// true where η (equivalently T) vanishes
        mask: Vec<bool>,
    },
}


pub fn leaf_structure(data: &HypersurfaceData, tau_deg: f64) -> LeafStructure {
    let n = data.n();
    let zero: Vec<bool> = data
        .grid
        .nodes()
        .map(|node| {
            let t = data.t_at(node);
            (0..n).map(|k| t[k].abs()).fold(0.0f64, f64::max) <= tau_deg
        })
        .collect();
    if zero.iter().all(|&z| z) {
        LeafStructure::Slice
    } else if zero.iter().all(|&z| !z) {
        let bins = crate::conditions::pi_bins(data);
        LeafStructure::Foliated {
            labels: bins.labels,
        }
    } else {
        LeafStructure::Mixed { mask: zero }
    }
}
