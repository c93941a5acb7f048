//! Mean-curvature norm of π-level leaves in Robertson-Walker 4-spacetimes
//! and the marginally-trapped criterion.
//!
//! Requires n = 3, ε = −1. For a spacelike leaf L of ker η with normal
//! bundle spanned by 𝐓 = T/√|⟨T,T⟩| and e₄, the squared mean curvature is
//!
//!   `4⟨H,H⟩ = (1/⟨T,T⟩)(2a′/a + ε₄ T₄ h)² + ε₄ h²`,
//!   `h = trace(A) − ⟨AT,T⟩/⟨T,T⟩`,
//!
//! and ⟨H,H⟩ = 0 exactly at the roots of
//! `h² − (4a′T₄/a) h − 4ε₄ (a′/a)² = 0`. The boolean reported per node is a
//! null-mean-curvature test (maximal surfaces included), evaluated through
//! this quadratic.

use crate::conditions::pi_bins;
use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::surface::HypersurfaceData;

/// Per-node inputs of the leaf computations.
#[derive(Clone, Copy, Debug)]
pub struct HorizonNode<'a> {
    /// warp jet at π(node)
    pub a: Jet2,
    /// frame components (T_1, T_2, T_3)
    pub t: &'a [f64],
    /// normal component T₄
    pub t4: f64,
    /// shape operator in the frame basis, 3×3
    pub shape: &'a [f64],
    /// tangent signs (ε_1, ε_2, ε_3)
    pub tangent_signs: &'a [f64],
    /// ε₄
    pub eps4: f64,
}

impl<'a> HorizonNode<'a> {
    /// ⟨T,T⟩ = Σ ε_k T_k².
    pub fn t_norm(&self) -> f64 {
        (0..3)
            .map(|k| self.tangent_signs[k] * self.t[k] * self.t[k])
            .sum()
    }
}

/// `h = trace(A) − ⟨AT,T⟩/⟨T,T⟩`. Errors on degenerate ⟨T,T⟩.
pub fn mean_h(node: &HorizonNode<'_>, tau_deg: f64) -> Result<f64> {
    let tt = node.t_norm();
    if tt.abs() < tau_deg {
        return Err(Error::Data(format!(
            "⟨T,T⟩ = {tt:.3e} is degenerate (below {tau_deg:.1e})"
        )));
    }
    let a = node.shape;
    let trace = a[0] + a[4] + a[8];
    // AT in frame coefficients: c_k = ε_k T_k, (A c)_l; then
    // ⟨AT, T⟩ = Σ_l ε_l (A c)_l T_l... with T = Σ ε_k T_k e_k and
    // ⟨e_l, T⟩ = T_l: ⟨AT,T⟩ = Σ_l (A c)_l ⟨e_l, T⟩ = Σ_l (A c)_l T_l.
    let mut att = 0.0;
    for l in 0..3 {
        let mut acl = 0.0;
        for k in 0..3 {
            acl += a[l * 3 + k] * node.tangent_signs[k] * node.t[k];
        }
        att += acl * node.t[l];
    }
    Ok(trace - att / tt)
}

/// `⟨H,H⟩` through the displayed closed form (the returned value is
/// ⟨H,H⟩ itself, i.e. the display divided by 4).
pub fn h_squared(node: &HorizonNode<'_>, tau_deg: f64) -> Result<f64> {
    let h = mean_h(node, tau_deg)?;
    h_squared_from_h(node, h)
}

pub fn h_squared_from_h(node: &HorizonNode<'_>, h: f64) -> Result<f64> {
    let tt = node.t_norm();
    // spacelike leaves with a unit normal pair force ε₄ ε_T = −1
    if node.eps4 * tt.signum() > 0.0 {
        return Err(Error::Data(format!(
            "ε₄·sign⟨T,T⟩ must be −1 on spacelike leaves; got ε₄ = {}, ⟨T,T⟩ = {tt:.3e}",
            node.eps4
        )));
    }
    let da = node.a.d1 / node.a.v;
    let s = 2.0 * da + node.eps4 * node.t4 * h;
    Ok(0.25 * (s * s / tt + node.eps4 * h * h))
}

/// The two h-roots of `h² − (4a′T₄/a)h − 4ε₄(a′/a)² = 0`, when real.
pub fn trapped_roots(node: &HorizonNode<'_>) -> Option<(f64, f64)> {
    let da = node.a.d1 / node.a.v;
    let disc = node.t4 * node.t4 + node.eps4;
    if disc < 0.0 {
        return None;
    }
    let r = 2.0 * da.abs() * disc.sqrt();
    let base = 2.0 * da * node.t4;
    Some((base - r, base + r))
}

#[derive(Clone, Debug)]
pub struct LeafPointReport {
    pub node: usize,
    pub h: f64,
    pub h_sq: f64,
    /// |⟨H,H⟩| ≤ τ_trap (null mean curvature, maximal surfaces included)
    pub trapped: bool,
    /// +1 / −1: which quadratic root the node's h is nearest; 0 when the
    /// quadratic has no real roots
    pub branch: i8,
    /// degenerate ⟨T,T⟩ or non-spacelike leaf: h, h_sq are unset
    pub masked: bool,
    /// π-bin id of the leaf the node belongs to
    pub leaf: usize,
}

#[derive(Clone, Debug)]
pub struct LeafVerdict {
    pub leaf: usize,
    /// mean π over the leaf's nodes
    pub t: f64,
    /// every unmasked node satisfies |⟨H,H⟩| ≤ τ_trap
    pub trapped: bool,
    /// at least one masked node: verdict is indeterminate, never a silent pass
    pub indeterminate: bool,
    pub max_abs_h_sq: f64,
    pub nodes: usize,
}

#[derive(Clone, Debug)]
pub struct TrappedScan {
    pub points: Vec<LeafPointReport>,
    pub leaves: Vec<LeafVerdict>,
    pub tau_trap: f64,
}

/// Per-node report plus per-leaf aggregation by π-bin.
pub fn trapped_scan(data: &HypersurfaceData, tau_trap: f64, tau_deg: f64) -> Result<TrappedScan> {
    if data.n() != 3 {
        return Err(Error::Data(format!(
            "horizon scan needs a 3-dimensional chart, got {}",
            data.n()
        )));
    }
    if data.signs.epsilon != -1.0 {
        return Err(Error::Signs("horizon scan needs ε = −1".into()));
    }
    let bins = pi_bins(data);
    let n = 3usize;
    let tangent_signs: Vec<f64> = (1..=n).map(|i| data.signs.eps[i]).collect();
    let eps4 = data.signs.eps_normal();
    let mut points = Vec::with_capacity(data.grid.len());
    for node in data.grid.nodes() {
        let hn = HorizonNode {
            a: data.warp_jet(node)?,
            t: data.t_at(node),
            t4: data.t_normal[node],
            shape: data.shape.at(node),
            tangent_signs: &tangent_signs,
            eps4,
        };
        let leaf = bins.labels[node];
        // leaf spacelike: restriction of ⟨,⟩ to ker η positive definite
        let spacelike = leaf_restriction_positive(data, node, tau_deg);
        let degenerate = hn.t_norm().abs() < tau_deg;
        if degenerate || !spacelike {
            points.push(LeafPointReport {
                node,
                h: 0.0,
                h_sq: 0.0,
                trapped: false,
                branch: 0,
                masked: true,
                leaf,
            });
            continue;
        }
        let h = mean_h(&hn, tau_deg)?;
        let hsq = h_squared_from_h(&hn, h)?;
        let branch = match trapped_roots(&hn) {
            Some((lo, hi)) => {
                if (h - lo).abs() <= (h - hi).abs() {
                    -1
                } else {
                    1
                }
            }
            None => 0,
        };
        points.push(LeafPointReport {
            node,
            h,
            h_sq: hsq,
            trapped: hsq.abs() <= tau_trap,
            branch,
            masked: false,
            leaf,
        });
    }
    let mut leaves = Vec::new();
    for &id in &bins.ids {
        let mut trapped = true;
        let mut indeterminate = false;
        let mut max_abs = 0.0f64;
        let mut pi_sum = 0.0;
        let mut count = 0usize;
        for p in points.iter().filter(|p| p.leaf == id) {
            pi_sum += data.pi[p.node];
            count += 1;
            if p.masked {
                indeterminate = true;
                continue;
            }
            max_abs = max_abs.max(p.h_sq.abs());
            trapped &= p.trapped;
        }
        leaves.push(LeafVerdict {
            leaf: id,
            t: pi_sum / count.max(1) as f64,
            trapped: trapped && !indeterminate,
            indeterminate,
            max_abs_h_sq: max_abs,
            nodes: count,
        });
    }
    Ok(TrappedScan {
        points,
        leaves,
        tau_trap,
    })
}

/// Positive-definiteness of ⟨,⟩ restricted to ker η at one node, via the
/// Gram matrix of a frame-component basis of ker η.
fn leaf_restriction_positive(data: &HypersurfaceData, node: usize, tau_deg: f64) -> bool {
    let n = data.n();
    let t = data.t_at(node);
    let signs: Vec<f64> = (1..=n).map(|i| data.signs.eps[i]).collect();
    // ker η in frame coefficients: {c : Σ c_k T_k = 0}
    // pick the largest |T_k| as the dependent coordinate
    let (kmax, tmax) = (0..n)
        .map(|k| (k, t[k]))
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .unwrap();
    if tmax.abs() < tau_deg {
        // T ≈ 0: every tangent vector is in ker η; check full signature
        return signs.iter().all(|&s| s > 0.0);
    }
    // basis: for each k ≠ kmax, c = e_k − (T_k/T_kmax) e_kmax
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 0..n {
        if k == kmax {
            continue;
        }
        let mut c = vec![0.0; n];
        c[k] = 1.0;
        c[kmax] = -t[k] / tmax;
        basis.push(c);
    }
    // Gram matrix ⟨u,v⟩ = Σ ε_k u_k v_k (frame coefficients)
    let dim = basis.len();
    let mut gram = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            gram[i * dim + j] = (0..n).map(|k| signs[k] * basis[i][k] * basis[j][k]).sum();
        }
    }
    // leading principal minors positive
    match dim {
        1 => gram[0] > 0.0,
        2 => gram[0] > 0.0 && (gram[0] * gram[3] - gram[1] * gram[2]) > 0.0,
        _ => false,
    }
}
