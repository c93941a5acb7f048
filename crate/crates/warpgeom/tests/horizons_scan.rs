//! Trapped-leaf scanning on synthetic Robertson-Walker chart data, the
//! brute-force mean-curvature oracle, and frame covariance of the scalars.

use warpgeom::ambient::SignatureData;
use warpgeom::calculus::MetricField;
use warpgeom::grid::{Axis, ChartGrid};
use warpgeom::horizons::*;
use warpgeom::jet::Jet2;
use warpgeom::scalar_field::ScalarField1D;
use warpgeom::surface::{FrameField, FrameMatrixField, HypersurfaceData};

/// Flat Lorentzian 3-chart (u, v, w) with metric diag(1,1,−1), π = w,
/// T = −grad π = ∂w (so T₃ = −1, T₄ = 0, ⟨T,T⟩ = −1), warp a(t) = exp(t)
/// giving a′/a ≡ 1. The per-node umbilic shape factor is a free dial.
fn rw_chart(lambda: &dyn Fn(f64) -> f64) -> HypersurfaceData {
    let grid = ChartGrid::new(vec![
        Axis::new(0.0, 1.0, 7),
        Axis::new(0.0, 1.0, 7),
        Axis::new(-0.5, 0.5, 9),
    ])
    .unwrap();
    let signs = SignatureData::new(3, 0, 1.0, -1.0, &[1.0, 1.0, -1.0], 1.0).unwrap();
    let n = 3;
    let mut metric = MetricField::zeros(&grid);
    let mut frame = FrameField::zeros(&grid);
    let mut shape = FrameMatrixField::zeros(&grid);
    let mut t_frame = vec![0.0; grid.len() * n];
    let mut pi = vec![0.0; grid.len()];
    for node in grid.nodes() {
        let g = metric.at_mut(node);
        g[0] = 1.0;
        g[4] = 1.0;
        g[8] = -1.0;
        for i in 0..3 {
            frame.vector_mut(node, i)[i] = 1.0;
        }
        let w = grid.coord(node, 2);
        let l = lambda(w);
        let a = shape.at_mut(node);
        a[0] = l;
        a[4] = l;
        a[8] = l;
        // T = ∂w in chart coords; frame components T_k = ⟨e_k, T⟩
        t_frame[node * n + 2] = -1.0;
        pi[node] = w;
    }
    let warp = ScalarField1D::new("exp(t)", "t", (-1.0, 1.0)).unwrap();
    let data = HypersurfaceData {
        grid,
        signs,
        metric,
        frame,
        shape,
        t_frame,
        t_normal: vec![0.0; 7 * 7 * 9],
        pi,
        warp,
        analytic: None,
        rho: None,
    };
    data.validate().unwrap();
    data
}

#[test]
fn tuned_umbilic_grid_is_fully_trapped() {
    // T₄ = 0, ε₄ = +1: the roots are h = ±2a′/a = ±2; umbilic A = λ Id has
    // h = 3λ − λ = 2λ, so λ ≡ a′/a = 1 lands every node on the + root
    let data = rw_chart(&|_| 1.0);
    let scan = trapped_scan(&data, 1e-6, 1e-8).unwrap();
    assert!(scan.points.iter().all(|p| !p.masked));
    assert!(scan.points.iter().all(|p| p.trapped));
    assert!(scan.points.iter().all(|p| p.branch == 1));
    assert!(!scan.leaves.is_empty());
    assert!(scan.leaves.iter().all(|l| l.trapped && !l.indeterminate));
}

#[test]
fn one_percent_perturbation_unflags_everything() {
    let data = rw_chart(&|_| 1.01);
    let scan = trapped_scan(&data, 1e-6, 1e-8).unwrap();
    assert!(scan.points.iter().all(|p| !p.trapped));
    assert!(scan.leaves.iter().all(|l| !l.trapped));
}

#[test]
fn flagged_iff_h_matches_two_aprime_over_a() {
    // with T₄ = 0 and ε₄ = +1 a node is null-mean-curvature iff |h| = 2|a′/a|
    for (lam, want) in [(1.0, true), (-1.0, true), (0.7, false), (1.3, false)] {
        let data = rw_chart(&|_| lam);
        let scan = trapped_scan(&data, 1e-6, 1e-8).unwrap();
        assert!(
            scan.points.iter().all(|p| p.trapped == want),
            "λ = {lam}: expected trapped = {want}"
        );
    }
}

#[test]
fn masked_nodes_make_leaves_indeterminate() {
    // degenerate ⟨T,T⟩ on part of the grid: zero out T on one w-level
    let mut data = rw_chart(&|_| 1.0);
    let n = 3;
    let target = 4usize; // w-level index
    for node in data.grid.nodes() {
        if data.grid.multi(node)[2] == target {
            data.t_frame[node * n + 2] = 0.0;
        }
    }
    let scan = trapped_scan(&data, 1e-6, 1e-8).unwrap();
    assert!(scan.points.iter().any(|p| p.masked));
    assert!(scan.leaves.iter().any(|l| l.indeterminate));
    // masked leaves are never reported as trapped
    for leaf in scan.leaves.iter().filter(|l| l.indeterminate) {
        assert!(!leaf.trapped);
    }
}

fn lcg(seed: &mut u64) -> f64 {
    *seed = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    ((*seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
}

/// Random sign-consistent leaf data: tangent signs (1,1,−1), ε₄ = ±1, T
/// along e₃ scaled so condition (B) holds with the requested T₄.
struct RandomLeaf {
    t: [f64; 3],
    t4: f64,
    shape: [f64; 9],
    a: Jet2,
}

fn random_leaf(seed: &mut u64, eps4: f64) -> RandomLeaf {
    let t4 = if eps4 > 0.0 {
        2.0 * lcg(seed)
    } else {
        // ε₄ = −1 needs ⟨T,T⟩ = −1 + T₄² > 0
        let s = lcg(seed);
        s.signum() * (1.2 + s.abs())
    };
    // ⟨T,T⟩ = ε − ε₄T₄² = −1 − ε₄T₄² with ε_T = −ε₄
    let tt = -1.0 - eps4 * t4 * t4;
    let t3 = (-tt * 1.0f64).abs().sqrt() * if eps4 > 0.0 { 1.0 } else { f64::NAN };
    let t = if eps4 > 0.0 {
        // timelike T along e₃ (ε₃ = −1): ⟨T,T⟩ = −T₃²
        [0.0, 0.0, t3]
    } else {
        // spacelike T along e₁
        [tt.sqrt(), 0.0, 0.0]
    };
    let mut shape = [0.0; 9];
    for (i, s) in shape.iter_mut().enumerate() {
        *s = lcg(seed);
        let _ = i;
    }
    // symmetrize in the (1,1,−1) frame signs: ε_j A_ji = ε_i A_ij
    let signs = [1.0, 1.0, -1.0];
    for i in 0..3 {
        for j in (i + 1)..3 {
            shape[j * 3 + i] = signs[i] * shape[i * 3 + j] / signs[j];
        }
    }
    let a = Jet2 {
        v: 0.5 + lcg(seed).abs() * 2.0,
        d1: 2.0 * lcg(seed),
        d2: 0.0,
    };
    RandomLeaf { t, t4, shape, a }
}

#[test]
fn h_squared_matches_bruteforce_sigma_trace() {
    // assemble σ(u_i,u_i) on an explicit random orthonormal leaf frame,
    // trace, and take the ambient norm; compare with the closed form
    let tangent_signs = [1.0, 1.0, -1.0];
    let mut seed = 2024u64;
    for trial in 0..500 {
        let eps4 = if trial % 2 == 0 { 1.0 } else { -1.0 };
        let leaf = random_leaf(&mut seed, eps4);
        if leaf.t.iter().any(|x| x.is_nan()) {
            continue;
        }
        let node = HorizonNode {
            a: leaf.a,
            t: &leaf.t,
            t4: leaf.t4,
            shape: &leaf.shape,
            tangent_signs: &tangent_signs,
            eps4,
        };
        let tt = node.t_norm();
        // random orthonormal {u₁,u₂} spanning ker η (frame coefficients,
        // positive-definite directions)
        let mut basis: Vec<[f64; 3]> = Vec::new();
        // coefficients c with Σ c_k T_k = 0
        let (kmax, tmax) = (0..3)
            .map(|k| (k, leaf.t[k]))
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .unwrap();
        for k in 0..3 {
            if k == kmax {
                continue;
            }
            let mut c = [0.0; 3];
            c[k] = 1.0;
            c[kmax] = -leaf.t[k] / tmax;
            basis.push(c);
        }
        // Gram-Schmidt in the sign-weighted product
        let ip = |x: &[f64; 3], y: &[f64; 3]| -> f64 {
            (0..3).map(|k| tangent_signs[k] * x[k] * y[k]).sum()
        };
        let mut u1 = basis[0];
        let n1 = ip(&u1, &u1);
        if n1 <= 1e-9 {
            continue;
        }
        let s1 = n1.sqrt();
        u1.iter_mut().for_each(|x| *x /= s1);
        let mut u2 = basis[1];
        let c = ip(&u2, &u1);
        for k in 0..3 {
            u2[k] -= c * u1[k];
        }
        let n2 = ip(&u2, &u2);
        if n2 <= 1e-9 {
            continue;
        }
        let s2 = n2.sqrt();
        u2.iter_mut().for_each(|x| *x /= s2);

        // σ(u,u) contributions: ⟨u, ∇_u T⟩ with ∇_u T = (a′/a)u + ε₄T₄Au
        let au = |u: &[f64; 3]| -> [f64; 3] {
            let mut out = [0.0; 3];
            for l in 0..3 {
                for k in 0..3 {
                    out[l] += leaf.shape[l * 3 + k] * u[k];
                }
            }
            out
        };
        // ⟨Au, u⟩ in frame coefficients with signs
        let q = |u: &[f64; 3]| -> f64 { ip(&au(u), u) };
        let da = leaf.a.d1 / leaf.a.v;
        let q_sum = q(&u1) + q(&u2);
        let ct = -(2.0 * da + eps4 * leaf.t4 * q_sum) / tt;
        let ce4 = eps4 * q_sum;
        // 4⟨H,H⟩ = cT²⟨T,T⟩ + ce₄²ε₄
        let brute = ct * ct * tt + ce4 * ce4 * eps4;
        let closed = 4.0 * h_squared(&node, 1e-10).unwrap();
        assert!(
            (brute - closed).abs() < 1e-8 * (1.0 + brute.abs()),
            "trial {trial}: brute {brute} vs closed {closed}"
        );
    }
}

#[test]
fn scalars_are_frame_covariant() {
    // a global frame rotation O (orthogonal for the sign-weighted product)
    // transforms T ↦ OᵀT and A ↦ O⁻¹AO and leaves h, ⟨H,H⟩ unchanged
    let tangent_signs = [1.0, 1.0, -1.0];
    let ghat = [1.0, 1.0, -1.0];
    let mut seed = 77u64;
    for _ in 0..200 {
        let leaf = random_leaf(&mut seed, 1.0);
        let node = HorizonNode {
            a: leaf.a,
            t: &leaf.t,
            t4: leaf.t4,
            shape: &leaf.shape,
            tangent_signs: &tangent_signs,
            eps4: 1.0,
        };
        // O = exp(K) with K ĝ-skew
        let mut k = warpgeom::linalg::SqMat::zeros(3);
        let (a, b, c) = (lcg(&mut seed), lcg(&mut seed), lcg(&mut seed));
        k.set(0, 1, a);
        k.set(1, 0, -a);
        k.set(0, 2, b);
        k.set(2, 0, b);
        k.set(1, 2, c);
        k.set(2, 1, c);
        assert!(k.g_skew_residual(&ghat) < 1e-14);
        let o = k.expm();
        // T′ = Oᵀ T
        let mut t2 = [0.0; 3];
        for kk in 0..3 {
            for l in 0..3 {
                t2[kk] += o.at(l, kk) * leaf.t[l];
            }
        }
        // A′ = O⁻¹ A O
        let oinv = o.g_inverse(&ghat);
        let mut amat = warpgeom::linalg::SqMat::zeros(3);
        amat.a.copy_from_slice(&leaf.shape);
        let a2 = oinv.mul(&amat).mul(&o);
        let mut shape2 = [0.0; 9];
        shape2.copy_from_slice(&a2.a);
        let node2 = HorizonNode {
            a: leaf.a,
            t: &t2,
            t4: leaf.t4,
            shape: &shape2,
            tangent_signs: &tangent_signs,
            eps4: 1.0,
        };
        let h1 = mean_h(&node, 1e-10).unwrap();
        let h2 = mean_h(&node2, 1e-10).unwrap();
        assert!((h1 - h2).abs() < 1e-10, "h not covariant: {h1} vs {h2}");
        let s1 = h_squared(&node, 1e-10).unwrap();
        let s2 = h_squared(&node2, 1e-10).unwrap();
        assert!((s1 - s2).abs() < 1e-10);
    }
}
