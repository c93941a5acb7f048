//! Closed-form geometry of the warped products `ε·I ×_a E^{n+1}` and
//! `ε·I ×_a M(c)`: sign bookkeeping, both curvature tensors, the quadric
//! embedding of the space form, the fiber Weingarten operator, and the
//! right-hand sides of the Gauss and Codazzi equations.

use crate::error::{Error, Result};
use crate::jet::Jet2;

/// All sign constants and dimensions of a scenario.
///
/// The ambient frame index runs `0, 1…n, n+1` with slot 0 the fiber-normal
/// slot and slot n+1 the `∂_t` slot; `eps[0] = c` always, and the minus-sign
/// count of `eps` must equal the group index `q = k + |c−1|/2 + |ε−1|/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignatureData {
    /// chart (hypersurface) dimension
    pub n: usize,
    /// index of the space form fiber
    pub k: usize,
    /// fiber curvature c = ε₀ ∈ {−1, +1}
    pub c: f64,
    /// sign of dt²
    pub epsilon: f64,
    /// diagonal (ε_0, ε_1, …, ε_n, ε_{n+1}), length n+2
    pub eps: Vec<f64>,
}

impl SignatureData {
    pub fn new(
        n: usize,
        k: usize,
        c: f64,
        epsilon: f64,
        tangent_signs: &[f64],
        eps_normal: f64,
    ) -> Result<SignatureData> {
        if !(n == 2 || n == 3) {
            return Err(Error::Signs(format!("n must be 2 or 3, got {n}")));
        }
        for (name, v) in [("c", c), ("epsilon", epsilon), ("epsilon_normal", eps_normal)] {
            if v != 1.0 && v != -1.0 {
                return Err(Error::Signs(format!("{name} must be ±1, got {v}")));
            }
        }
        if tangent_signs.len() != n {
            return Err(Error::Signs(format!(
                "expected {n} tangent signs, got {}",
                tangent_signs.len()
            )));
        }
        if tangent_signs.iter().any(|&s| s != 1.0 && s != -1.0) {
            return Err(Error::Signs("tangent signs must be ±1".into()));
        }
        let mut eps = Vec::with_capacity(n + 2);
        eps.push(c);
        eps.extend_from_slice(tangent_signs);
        eps.push(eps_normal);
        let q = k + usize::from(c < 0.0) + usize::from(epsilon < 0.0);
        let minus = eps.iter().filter(|&&s| s < 0.0).count();
        if minus != q {
            return Err(Error::Signs(format!(
                "sign diagonal has {minus} minus signs but the group index is q = {q}"
            )));
        }
        Ok(SignatureData {
            n,
            k,
            c,
            epsilon,
            eps,
        })
    }

    pub fn eps_normal(&self) -> f64 {
        self.eps[self.n + 1]
    }

    pub fn tangent_sign(&self, i: usize) -> f64 {
        // i = 1..=n in the ambient index convention
        self.eps[i]
    }

    /// G_amb = diag(ε_0, …, ε_{n+1}).
    pub fn g_amb(&self) -> &[f64] {
        &self.eps
    }

    /// Spatial signs (ε_0, …, ε_n): the diagonal of g₀ on E^{n+1}.
    pub fn spatial_signs(&self) -> &[f64] {
        &self.eps[..=self.n]
    }

    /// Index of the pseudo-orthogonal group the frames live in.
    pub fn group_index(&self) -> usize {
        self.eps.iter().filter(|&&s| s < 0.0).count()
    }
}

/// A vector in the parallel frame `(E_0, …, E_n, ∂_t)` of `ε·I ×_a E^{n+1}`:
/// coords 0..=n are the scaled fiber directions, the last slot is ∂_t.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientVector {
    pub coords: Vec<f64>,
}

impl AmbientVector {
    pub fn zeros(m: usize) -> AmbientVector {
        AmbientVector {
            coords: vec![0.0; m],
        }
    }

    pub fn from_coords(coords: Vec<f64>) -> AmbientVector {
        AmbientVector { coords }
    }

    pub fn t_component(&self) -> f64 {
        *self.coords.last().unwrap()
    }
}

/// Warped inner product `⟨V,W⟩ = a² Σ ε_α V_α W_α + ε V_t W_t` in the
/// parallel (unscaled) frame.
pub fn dot_warped(v: &AmbientVector, w: &AmbientVector, a: f64, signs: &SignatureData) -> f64 {
    let n = signs.n;
    let mut s = 0.0;
    for alpha in 0..=n {
        s += signs.eps[alpha] * v.coords[alpha] * w.coords[alpha];
    }
    a * a * s + signs.epsilon * v.coords[n + 1] * w.coords[n + 1]
}

fn dot_dt(v: &AmbientVector, signs: &SignatureData) -> f64 {
    signs.epsilon * v.t_component()
}

/// Curvature of the flat-fiber warp `ε·I ×_a E^{n+1}`:
///
/// `R̃(X,Y,Z,W) = ε (a′/a)² (⟨X,Z⟩⟨Y,W⟩ − ⟨Y,Z⟩⟨X,W⟩)
///   + (a″/a − (a′/a)²) (⟨X,Z⟩⟨Y,∂t⟩⟨W,∂t⟩ − ⟨Y,Z⟩⟨X,∂t⟩⟨W,∂t⟩
///                       − ⟨X,W⟩⟨Y,∂t⟩⟨Z,∂t⟩ + ⟨Y,W⟩⟨X,∂t⟩⟨Z,∂t⟩)`.
pub fn curvature_flat_warp(
    x: &AmbientVector,
    y: &AmbientVector,
    z: &AmbientVector,
    w: &AmbientVector,
    a: Jet2,
    signs: &SignatureData,
) -> f64 {
    let av = a.v;
    let da = a.d1 / av;
    let c1 = signs.epsilon * da * da;
    let c2 = a.d2 / av - da * da;
    curvature_from_coeffs(x, y, z, w, av, signs, c1, c2)
}

/// Curvature of the space-form warp `ε·I ×_a M(c)`: same structure with
/// coefficients `ε(a′/a)² − ε₀/a²` and `a″/a − (a′/a)² + ε ε₀/a²`.
pub fn curvature_spaceform_warp(
    x: &AmbientVector,
    y: &AmbientVector,
    z: &AmbientVector,
    w: &AmbientVector,
    a: Jet2,
    signs: &SignatureData,
) -> f64 {
    let av = a.v;
    let da = a.d1 / av;
    let c1 = signs.epsilon * da * da - signs.c / (av * av);
    let c2 = a.d2 / av - da * da + signs.epsilon * signs.c / (av * av);
    curvature_from_coeffs(x, y, z, w, av, signs, c1, c2)
}

fn curvature_from_coeffs(
    x: &AmbientVector,
    y: &AmbientVector,
    z: &AmbientVector,
    w: &AmbientVector,
    a: f64,
    signs: &SignatureData,
    c1: f64,
    c2: f64,
) -> f64 {
    let ip = |p: &AmbientVector, q: &AmbientVector| dot_warped(p, q, a, signs);
    let xt = dot_dt(x, signs);
    let yt = dot_dt(y, signs);
    let zt = dot_dt(z, signs);
    let wt = dot_dt(w, signs);
    c1 * (ip(x, z) * ip(y, w) - ip(y, z) * ip(x, w))
        + c2 * (ip(x, z) * yt * wt - ip(y, z) * xt * wt - ip(x, w) * yt * zt
            + ip(y, w) * xt * zt)
}

/// Lift a point of the space-form quadric and build the fiber normal
/// `e₀ = (0, p/a)`, which satisfies `⟨e₀,e₀⟩ = c`.
///
/// The quadric is `g₀(p,p) = c` with `g₀ = diag(ε_0,…,ε_n)`. Note the
/// normalization `Ξ/a` rather than `Ξ/(c·a)`: the hyperbolic worked data in
/// this crate (and the immersion map `χ_α = ε_α B_{α0}` it anchors) use the
/// outward position normal for both signs of c.
pub fn spaceform_embed(
    p: &[f64],
    a: f64,
    signs: &SignatureData,
) -> Result<(AmbientVector, AmbientVector)> {
    let n = signs.n;
    if p.len() != n + 1 {
        return Err(Error::ShapeMismatch(format!(
            "expected {} quadric coordinates, got {}",
            n + 1,
            p.len()
        )));
    }
    let norm: f64 = p
        .iter()
        .zip(signs.spatial_signs())
        .map(|(x, s)| s * x * x)
        .sum();
    if (norm - signs.c).abs() > 1e-10 {
        return Err(Error::Data(format!(
            "point is not on the quadric: g₀(p,p) = {norm}, expected {}",
            signs.c
        )));
    }
    let mut point = vec![0.0; n + 2];
    let mut e0 = vec![0.0; n + 2];
    for alpha in 0..=n {
        point[alpha] = p[alpha];
        e0[alpha] = p[alpha] / a;
    }
    Ok((
        AmbientVector::from_coords(point),
        AmbientVector::from_coords(e0),
    ))
}

/// Weingarten operator of the space-form embedding with respect to the
/// curvature-normalized normal `Ξ/(c·a)`:
///
/// `S Y = −(1/(a c)) (Y − ε ⟨Y,∂t⟩ ∂t)`.
pub fn weingarten(y: &AmbientVector, a: f64, signs: &SignatureData) -> AmbientVector {
    let m = y.coords.len();
    let mut out = vec![0.0; m];
    let f = -1.0 / (a * signs.c);
    for alpha in 0..m - 1 {
        out[alpha] = f * y.coords[alpha];
    }
    // the ∂t part of Y − ε⟨Y,∂t⟩∂t cancels: ⟨∂t,∂t⟩ = ε and ε² = 1
    out[m - 1] = 0.0;
    AmbientVector::from_coords(out)
}

/// Scalar inputs of the Gauss right-hand side at one point: the pairwise
/// inner products of the four tangent vectors, their η-values, and the four
/// shape-operator products `⟨A·,·⟩`.
#[derive(Clone, Copy, Debug, Default)]
pub struct GaussData {
    pub xz: f64,
    pub yw: f64,
    pub yz: f64,
    pub xw: f64,
    pub eta_x: f64,
    pub eta_y: f64,
    pub eta_z: f64,
    pub eta_w: f64,
    /// ⟨AY,Z⟩
    pub ayz: f64,
    /// ⟨AX,W⟩
    pub axw: f64,
    /// ⟨AY,W⟩
    pub ayw: f64,
    /// ⟨AX,Z⟩
    pub axz: f64,
}

/// Right-hand side of the Gauss equation of `M` in `ε·I ×_a M(c)`:
///
/// `(ε(a′/a)² − ε₀/a²)(⟨X,Z⟩⟨Y,W⟩ − ⟨Y,Z⟩⟨X,W⟩)
///  + (a″/a − (a′/a)² + εε₀/a²)(⟨X,Z⟩η(Y)η(W) − ⟨Y,Z⟩η(X)η(W)
///                              − ⟨X,W⟩η(Y)η(Z) + ⟨Y,W⟩η(X)η(Z))
///  + ε_{n+1}(⟨AY,Z⟩⟨AX,W⟩ − ⟨AY,W⟩⟨AX,Z⟩)`.
pub fn gauss_rhs(d: &GaussData, a: Jet2, signs: &SignatureData) -> f64 {
    let (c1, c2) = warp_coefficients(a, signs);
    c1 * (d.xz * d.yw - d.yz * d.xw)
        + c2 * (d.xz * d.eta_y * d.eta_w - d.yz * d.eta_x * d.eta_w - d.xw * d.eta_y * d.eta_z
            + d.yw * d.eta_x * d.eta_z)
        + signs.eps_normal() * (d.ayz * d.axw - d.ayw * d.axz)
}

/// The two scalar coefficients of the space-form-warp curvature:
/// `c1 = ε(a′/a)² − ε₀/a²`, `c2 = a″/a − (a′/a)² + εε₀/a²`.
pub fn warp_coefficients(a: Jet2, signs: &SignatureData) -> (f64, f64) {
    let av = a.v;
    let da = a.d1 / av;
    (
        signs.epsilon * da * da - signs.c / (av * av),
        a.d2 / av - da * da + signs.epsilon * signs.c / (av * av),
    )
}

/// Scalar coefficient of the Codazzi right-hand side
/// `(∇_X A)Y − (∇_Y A)X = coeff · (η(Y)X − η(X)Y)` with
/// `coeff = T_{n+1} (a″/a − (a′/a)² + εε₀/a²)`.
pub fn codazzi_coefficient(t_normal: f64, a: Jet2, signs: &SignatureData) -> f64 {
    let (_, c2) = warp_coefficients(a, signs);
    t_normal * c2
}
