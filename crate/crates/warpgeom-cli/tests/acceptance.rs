//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `--nocapture` to see the measured numbers).
//!
//! Criterion 2 carries a sub-clause that is unattainable with the pinned
//! 2nd-order stencils on the default charts (see docs/accuracy.md): the
//! clause is asserted as stated and its failure message reports the measured
//! values and the error-budget bound.

use std::process::Command;
use std::time::Instant;

use warpgeom::conditions::{box_max, run_all};
use warpgeom::frames::{build_connection_forms, flatness_residual, GatePolicy};
use warpgeom::jet::Jet2;
use warpgeom::linalg::SqMat;
use warpgeom::reconstruct::{
    build_chi, integrate_field, integrate_frame, leaf_structure, staircase_path,
    verify_immersion, FrameElement, IntegrateOptions, LeafStructure,
};
use warpgeom::scenarios::{by_name, default_grid, graph_sphere, Scenario};
use warpgeom::ScalarField1D;

fn oracle_b(sc: &Scenario, node: usize) -> FrameElement {
    let m = sc.data.m();
    FrameElement {
        b: SqMat {
            n: m,
            a: sc.oracle.as_ref().unwrap().b[node * m * m..(node + 1) * m * m].to_vec(),
        },
    }
}

#[test]
fn criterion_1_structure_suite_converges_on_all_scenarios() {
    // analytic checks ≤ 1e-10 at 200×200; finite-difference checks either
    // exact or converging at observed order in [1.8, 2.2] over 50/100/200;
    // runtime ≤ 10 s per scenario at 200×200
    let resolutions = [50usize, 100, 200];
    for name in ["example1", "example2", "slice"] {
        let mut box_history: Vec<Vec<f64>> = Vec::new();
        let mut names: Vec<&'static str> = Vec::new();
        let mut fd_flags: Vec<bool> = Vec::new();
        let mut max_at_200: Vec<f64> = Vec::new();
        let mut runtime = 0.0f64;
        for &nodes in &resolutions {
            let sc = by_name(name, nodes).unwrap();
            let t0 = Instant::now();
            let reports = run_all(&sc.data).unwrap();
            if nodes == 200 {
                runtime = t0.elapsed().as_secs_f64();
            }
            if box_history.is_empty() {
                names = reports.iter().map(|r| r.name).collect();
                fd_flags = reports.iter().map(|r| r.fd_based).collect();
            }
            box_history.push(
                reports
                    .iter()
                    .map(|r| box_max(&sc.data.grid, &r.field, 0.15))
                    .collect(),
            );
            if nodes == 200 {
                max_at_200 = reports.iter().map(|r| r.max_abs).collect();
            }
        }
        for (ci, check) in names.iter().enumerate() {
            if !fd_flags[ci] {
                assert!(
                    max_at_200[ci] <= 1e-10,
                    "criterion 1 FAIL: {name}/{check} analytic residual {:.3e} > 1e-10",
                    max_at_200[ci]
                );
                continue;
            }
            let fine = box_history[2][ci];
            if fine <= 1e-10 {
                continue; // exact to rounding (e.g. T ≡ 0 conditions on the slice)
            }
            // observed order: least-squares slope of ln(residual) vs ln(h)
            // over the three resolutions
            let points: Vec<(f64, f64)> = (0..3)
                .map(|w| {
                    (
                        (1.0 / (resolutions[w] as f64 - 1.0)).ln(),
                        box_history[w][ci].ln(),
                    )
                })
                .collect();
            let xm = points.iter().map(|p| p.0).sum::<f64>() / 3.0;
            let ym = points.iter().map(|p| p.1).sum::<f64>() / 3.0;
            let order = points.iter().map(|p| (p.0 - xm) * (p.1 - ym)).sum::<f64>()
                / points.iter().map(|p| (p.0 - xm) * (p.0 - xm)).sum::<f64>();
            assert!(
                (1.8..=2.2).contains(&order),
                "criterion 1 FAIL: {name}/{check} observed order {order:.3} outside [1.8, 2.2] \
                 (residuals {:?})",
                box_history.iter().map(|r| r[ci]).collect::<Vec<_>>()
            );
        }
        assert!(
            runtime <= 10.0,
            "criterion 1 FAIL: {name} checks took {runtime:.1} s at 200x200"
        );
        println!(
            "[acceptance] criterion 1 {name}: PASS (orders in window, 200x200 maxima {:?}, {runtime:.2} s)",
            names
                .iter()
                .zip(&max_at_200)
                .map(|(n, v)| format!("{n}={v:.1e}"))
                .collect::<Vec<_>>()
        );
    }
}

#[test]
fn criterion_2_flatness_level_quartering_and_perturbation() {
    let resolutions = [50usize, 100, 200];
    let mut level_at_200 = Vec::new();
    for name in ["example1", "example2"] {
        let mut maxima = Vec::new();
        let mut perturbed_min = f64::INFINITY;
        for &nodes in &resolutions {
            let sc = by_name(name, nodes).unwrap();
            let out = build_connection_forms(&sc.data, GatePolicy::Skip).unwrap();
            let flat = flatness_residual(&sc.data.grid, &out.bundle).unwrap();
            maxima.push(flat.max_abs);
            // inject 1e-2·du into the (1,2) entry and its skew partner
            let mut bundle = out.bundle.clone();
            let m = bundle.upsilon.m;
            let e12 = sc.data.signs.eps[1] * sc.data.signs.eps[2];
            for node in sc.data.grid.nodes() {
                let blk = bundle.upsilon.block_mut(node, 0);
                blk[m + 2] += 1e-2;
                blk[2 * m + 1] -= e12 * 1e-2;
            }
            let pf = flatness_residual(&sc.data.grid, &bundle).unwrap();
            perturbed_min = perturbed_min.min(pf.max_abs);
        }
        let ratio = maxima[1] / maxima[2];
        assert!(
            (3.5..=4.5).contains(&ratio),
            "criterion 2 FAIL: {name} flatness does not quarter (ratio {ratio:.2})"
        );
        assert!(
            perturbed_min > 1e-3,
            "criterion 2 FAIL: {name} perturbed flatness {perturbed_min:.3e} ≤ 1e-3"
        );
        println!(
            "[acceptance] criterion 2 {name}: residuals {:?}, halving ratio {ratio:.2}, perturbed ≥ {perturbed_min:.2e}",
            maxima.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>()
        );
        level_at_200.push((name, maxima[2]));
    }
    // The absolute level clause. With the pinned 2nd-order exterior
    // derivative (required by the quartering clause above) the residual
    // floor on the default charts is (Δ²/6)·max|∂³Υ| ≈ 3e-5 at 200 nodes
    // per axis — the binding entry is the −sin(u)dv block of the graph
    // scenario, whose third derivative is fixed geometry, not a parameter;
    // see docs/accuracy.md. Asserted as stated; expected to fail.
    let worst = level_at_200
        .iter()
        .map(|(_, v)| *v)
        .fold(0.0f64, f64::max);
    assert!(
        worst <= 1e-5,
        "criterion 2 FAIL (known stencil-order bound): flatness maxima at 200x200 are {:?}, \
         above 1e-5; a 2nd-order exterior derivative cannot reach 1e-5 on these charts \
         (needs Δ ≤ 0.0077, i.e. ≥ 360 nodes per axis). The quartering and \
         perturbation-detection clauses PASS (printed above, rerun with --nocapture); \
         see docs/accuracy.md and the decisions ledger.",
        level_at_200
            .iter()
            .map(|(n, v)| format!("{n}={v:.3e}"))
            .collect::<Vec<_>>()
    );
}

#[test]
fn criterion_3_golden_form_equality_at_1e8() {
    for name in ["example1", "example2"] {
        let sc = by_name(name, 200).unwrap();
        let oracle = sc.oracle.as_ref().unwrap();
        let out = build_connection_forms(&sc.data, GatePolicy::Skip).unwrap();
        let interior = sc.data.grid.interior_nodes(2);
        let mut worst = 0.0f64;
        for (built, closed) in [
            (&out.bundle.omega, &oracle.omega),
            (&out.bundle.x, &oracle.x),
            (&out.bundle.upsilon, &oracle.upsilon),
        ] {
            let mm = built.m * built.m;
            for &node in &interior {
                for d in 0..sc.data.grid.dim() {
                    let a = built.block(node, d);
                    let b = closed.block(node, d);
                    for c in 0..mm {
                        worst = worst.max((a[c] - b[c]).abs());
                    }
                }
            }
        }
        assert!(
            worst <= 1e-8,
            "criterion 3 FAIL: {name} pipeline vs closed forms differ by {worst:.3e}"
        );
        println!("[acceptance] criterion 3 {name}: PASS (max entry deviation {worst:.2e})");
    }
}

#[test]
fn criterion_4_reconstruction_matches_closed_forms() {
    for name in ["example1", "example2"] {
        let sc = by_name(name, 200).unwrap();
        let data = &sc.data;
        let oracle = sc.oracle.as_ref().unwrap();
        let out = build_connection_forms(data, GatePolicy::Skip).unwrap();
        let origin = data.grid.index(&[100, 100]);
        let b0 = oracle_b(&sc, origin);
        let field = integrate_field(
            &data.grid,
            &out.bundle,
            data,
            &b0,
            origin,
            IntegrateOptions::default(),
        )
        .unwrap();
        let m = data.m();
        let mut berr = 0.0f64;
        let mut chierr = 0.0f64;
        let sample = build_chi(data, &field.b, 1e-6).unwrap();
        for node in data.grid.nodes() {
            for c in 0..m * m {
                berr = berr.max((field.b[node * m * m + c] - oracle.b[node * m * m + c]).abs());
            }
            for c in 0..m {
                chierr = chierr.max((sample.chi[node * m + c] - oracle.chi[node * m + c]).abs());
            }
        }
        let rep = verify_immersion(data, &sample).unwrap();
        assert!(berr <= 1e-5, "criterion 4 FAIL: {name} B error {berr:.3e}");
        assert!(chierr <= 1e-4, "criterion 4 FAIL: {name} χ error {chierr:.3e}");
        assert!(
            sample.quadric_max <= 1e-6,
            "criterion 4 FAIL: {name} quadric {:.3e}",
            sample.quadric_max
        );
        assert!(
            rep.isometry_max <= 1e-5,
            "criterion 4 FAIL: {name} isometry {:.3e}",
            rep.isometry_max
        );
        assert!(
            rep.dt_decomposition_max <= 1e-5,
            "criterion 4 FAIL: {name} ∂t decomposition {:.3e}",
            rep.dt_decomposition_max
        );
        assert!(
            rep.shape_recovery_max <= 1e-4,
            "criterion 4 FAIL: {name} shape recovery {:.3e}",
            rep.shape_recovery_max
        );
        println!(
            "[acceptance] criterion 4 {name}: PASS (B {berr:.2e}, χ {chierr:.2e}, quadric {:.2e}, \
             isometry {:.2e}, ∂t {:.2e}, shape {:.2e})",
            sample.quadric_max, rep.isometry_max, rep.dt_decomposition_max, rep.shape_recovery_max
        );
    }
}

#[test]
fn criterion_5_path_independence_and_drift() {
    for name in ["example1", "example2"] {
        let sc = by_name(name, 200).unwrap();
        let data = &sc.data;
        let grid = &data.grid;
        let out = build_connection_forms(data, GatePolicy::Skip).unwrap();
        let flat = flatness_residual(grid, &out.bundle).unwrap();
        let from = grid.index(&[4, 4]);
        let to = grid.index(&[195, 195]);
        let b0 = oracle_b(&sc, from);
        let p1 = staircase_path(grid, from, to, 0);
        let p2 = staircase_path(grid, from, to, 1);
        let (e1, s1) =
            integrate_frame(grid, &out.bundle, data, &b0, &p1, IntegrateOptions::default())
                .unwrap();
        let (e2, s2) =
            integrate_frame(grid, &out.bundle, data, &b0, &p2, IntegrateOptions::default())
                .unwrap();
        let diff = e1.b.sub(&e2.b).max_abs();
        let path_len: f64 = (0..2).map(|d| grid.spacing(d) * 191.0).sum();
        let bound = 10.0 * flat.max_abs * path_len;
        assert!(
            diff <= bound,
            "criterion 5 FAIL: {name} endpoint discrepancy {diff:.3e} > {bound:.3e}"
        );
        let drift = s1.max_pre_projection.max(s2.max_pre_projection);
        assert!(
            drift <= 1e-6,
            "criterion 5 FAIL: {name} group drift {drift:.3e} > 1e-6"
        );
        println!(
            "[acceptance] criterion 5 {name}: PASS (discrepancy {diff:.2e} ≤ {bound:.2e}, drift {drift:.2e})"
        );
    }
}

#[test]
fn criterion_6_slice_and_foliation_classification() {
    let sc = by_name("slice", 200).unwrap();
    let data = &sc.data;
    let out = build_connection_forms(data, GatePolicy::Skip).unwrap();
    let origin = data.grid.index(&[100, 100]);
    let b0 = warpgeom::reconstruct::initial_frame(data, origin).unwrap();
    let field = integrate_field(
        &data.grid,
        &out.bundle,
        data,
        &b0,
        origin,
        IntegrateOptions::default(),
    )
    .unwrap();
    let sample = build_chi(data, &field.b, 1e-6).unwrap();
    let m = data.m();
    let mean: f64 =
        data.grid.nodes().map(|k| sample.chi[k * m + m - 1]).sum::<f64>() / data.grid.len() as f64;
    let sd = (data
        .grid
        .nodes()
        .map(|k| (sample.chi[k * m + m - 1] - mean).powi(2))
        .sum::<f64>()
        / data.grid.len() as f64)
        .sqrt();
    assert!(sd <= 1e-8, "criterion 6 FAIL: slice t stddev {sd:.3e}");
    assert_eq!(
        leaf_structure(data, 1e-8),
        LeafStructure::Slice,
        "criterion 6 FAIL: slice not classified as slice"
    );
    // non-constant monotone profile: foliated
    let grid = default_grid("example1", 200).unwrap();
    let h = ScalarField1D::new("2 + 0.3*sin(u/2)", "u", (0.0, std::f64::consts::PI)).unwrap();
    let graph = graph_sphere(&h, grid).unwrap();
    match leaf_structure(&graph.data, 1e-8) {
        LeafStructure::Foliated { .. } => {}
        other => panic!("criterion 6 FAIL: expected foliated, got {other:?}"),
    }
    println!("[acceptance] criterion 6: PASS (t stddev {sd:.2e}, slice/foliated classified)");
}

fn lcg(seed: &mut u64) -> f64 {
    *seed = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    ((*seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
}

#[test]
fn criterion_7_horizon_algebra() {
    let tangent_signs = [1.0, 1.0, -1.0];
    let spacelike_signs = [1.0, 1.0, 1.0];
    let mut seed = 319u64;
    let mut tested = 0usize;
    while tested < 1000 {
        let eps4 = if tested % 2 == 0 { 1.0 } else { -1.0 };
        let (signs, t, t4): (&[f64; 3], [f64; 3], f64) = if eps4 > 0.0 {
            // ε_T = −1: timelike T along e₃
            let t4 = 2.0 * lcg(&mut seed);
            let t3 = (1.0 + t4 * t4).sqrt();
            (&tangent_signs, [0.0, 0.0, t3], t4)
        } else {
            // ε₄ = −1 needs ⟨T,T⟩ = −1 + T₄² > 0
            let raw = lcg(&mut seed);
            let t4 = raw.signum() * (1.2 + raw.abs());
            let t1 = (t4 * t4 - 1.0).sqrt();
            (&spacelike_signs, [t1, 0.0, 0.0], t4)
        };
        let a = Jet2 {
            v: 0.5 + lcg(&mut seed).abs() * 2.0,
            d1: 2.0 * lcg(&mut seed),
            d2: 0.0,
        };
        let shape = [0.0; 9];
        let node = warpgeom::horizons::HorizonNode {
            a,
            t: &t,
            t4,
            shape: &shape,
            tangent_signs: signs,
            eps4,
        };
        let Some((lo, hi)) = warpgeom::horizons::trapped_roots(&node) else {
            continue;
        };
        for root in [lo, hi] {
            let v = warpgeom::horizons::h_squared_from_h(&node, root).unwrap();
            assert!(
                v.abs() <= 1e-10,
                "criterion 7 FAIL: ⟨H,H⟩ = {v:.3e} at a quadratic root"
            );
        }
        tested += 1;
    }
    // worked point: a′/a = 1, T₄ = 0, ε₄ = +1, ⟨T,T⟩ = −1
    let t = [0.0, 0.0, 1.0];
    let shape = [0.0; 9];
    let node = warpgeom::horizons::HorizonNode {
        a: Jet2 { v: 1.0, d1: 1.0, d2: 0.0 },
        t: &t,
        t4: 0.0,
        shape: &shape,
        tangent_signs: &tangent_signs,
        eps4: 1.0,
    };
    let h2 = warpgeom::horizons::h_squared_from_h(&node, 2.0).unwrap();
    let h3 = warpgeom::horizons::h_squared_from_h(&node, 3.0).unwrap();
    assert_eq!(h2, 0.0, "criterion 7 FAIL: worked point h = 2");
    assert_eq!(h3, 1.25, "criterion 7 FAIL: worked point h = 3");

    // brute-force oracle: assemble σ(u_i, u_i) on explicit random
    // orthonormal leaf frames, trace, take the ambient norm, and compare
    // with the closed form
    let mut seed2 = 7u64;
    let mut compared = 0usize;
    while compared < 300 {
        let t4 = 2.0 * lcg(&mut seed2);
        let t3 = (1.0 + t4 * t4).sqrt();
        let t = [0.0, 0.0, t3]; // ⟨T,T⟩ = −1 − T₄² (timelike, ε₄ = +1)
        let mut shape = [0.0; 9];
        for s in shape.iter_mut() {
            *s = lcg(&mut seed2);
        }
        // self-adjoint in the (1,1,−1) frame signs
        for i in 0..3 {
            for j in (i + 1)..3 {
                shape[j * 3 + i] = tangent_signs[i] * shape[i * 3 + j] / tangent_signs[j];
            }
        }
        let a = Jet2 {
            v: 0.5 + lcg(&mut seed2).abs() * 2.0,
            d1: 2.0 * lcg(&mut seed2),
            d2: 0.0,
        };
        let node = warpgeom::horizons::HorizonNode {
            a,
            t: &t,
            t4,
            shape: &shape,
            tangent_signs: &tangent_signs,
            eps4: 1.0,
        };
        let tt = node.t_norm();
        // random orthonormal {u₁, u₂} in ker η (frame coefficients): the
        // e₃-coefficient is determined by Σ c_k T_k = 0
        let ip = |x: &[f64; 3], y: &[f64; 3]| -> f64 {
            (0..3).map(|k| tangent_signs[k] * x[k] * y[k]).sum()
        };
        let mut u1 = [lcg(&mut seed2), lcg(&mut seed2), 0.0];
        u1[2] = -(u1[0] * t[0] + u1[1] * t[1]) / t[2];
        let n1 = ip(&u1, &u1);
        if n1 <= 1e-6 {
            continue;
        }
        let s1 = n1.sqrt();
        u1.iter_mut().for_each(|x| *x /= s1);
        let mut u2 = [lcg(&mut seed2), lcg(&mut seed2), 0.0];
        u2[2] = -(u2[0] * t[0] + u2[1] * t[1]) / t[2];
        let c = ip(&u2, &u1);
        for k in 0..3 {
            u2[k] -= c * u1[k];
        }
        let n2 = ip(&u2, &u2);
        if n2 <= 1e-6 {
            continue;
        }
        let s2 = n2.sqrt();
        u2.iter_mut().for_each(|x| *x /= s2);

        // σ(u, u) = (−⟨u, ∇_u T⟩/⟨T,T⟩)·T + ε₄⟨u, Au⟩·e₄ with
        // ∇_u T = (a′/a)u + ε₄T₄Au on the leaf (η(u) = 0)
        let au = |u: &[f64; 3]| -> [f64; 3] {
            let mut out = [0.0; 3];
            for l in 0..3 {
                for k in 0..3 {
                    out[l] += shape[l * 3 + k] * u[k];
                }
            }
            out
        };
        let q = |u: &[f64; 3]| -> f64 { ip(&au(u), u) };
        let da = a.d1 / a.v;
        let q_sum = q(&u1) + q(&u2);
        let ct = -(2.0 * da + t4 * q_sum) / tt;
        let ce4 = q_sum;
        let brute = ct * ct * tt + ce4 * ce4; // 4⟨H,H⟩, ε₄ = +1
        let closed = 4.0 * warpgeom::horizons::h_squared(&node, 1e-10).unwrap();
        assert!(
            (brute - closed).abs() <= 1e-8 * (1.0 + brute.abs()),
            "criterion 7 FAIL: σ-trace oracle {brute} vs closed form {closed}"
        );
        compared += 1;
    }
    println!(
        "[acceptance] criterion 7: PASS (1000 random roots ≤ 1e-10, σ-trace oracle ≤ 1e-8, worked points exact)"
    );
}

/// Deterministic safe random expressions: depth-bounded trees whose division
/// and square-root arguments are bounded away from singularities.
fn random_expr(seed: &mut u64, depth: usize) -> String {
    if depth == 0 {
        return if lcg(seed) > 0.0 {
            "u".to_string()
        } else {
            format!("{:.3}", 1.5 * lcg(seed))
        };
    }
    let a = random_expr(seed, depth - 1);
    let b = random_expr(seed, depth - 1);
    match ((lcg(seed) + 1.0) * 4.0) as usize {
        0 => format!("({a} + {b})"),
        1 => format!("({a} - {b})"),
        2 => format!("({a} * {b})"),
        3 => format!("sin({a})"),
        4 => format!("cos({a})"),
        5 => format!("({a} / (1 + ({b})^2))"),
        6 => format!("sqrt(1 + ({a})^2)"),
        _ => format!("exp(0.3*{a})"),
    }
}

#[test]
fn criterion_8_expression_layer() {
    let mut seed = 0xfeedu64;
    let mut accepted = 0usize;
    let probes: Vec<f64> = (0..17).map(|k| -1.5 + 3.0 * (k as f64) / 16.0).collect();
    let h = 1e-5;
    while accepted < 100 {
        let src = random_expr(&mut seed, 3);
        let Ok(expr) = warpgeom::Expr::parse(&src, &["u"]) else {
            continue;
        };
        // tameness filter: values and derivatives bounded on the probes
        let mut ok = true;
        for &x in &probes {
            match expr.eval_jet2(&[x], 0) {
                Ok(j) if j.v.abs() < 1e3 && j.d1.abs() < 1e3 && j.d2.abs() < 1e4 => {}
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        accepted += 1;
        // jets against central finite differences at step 1e-5
        for &x in &probes {
            let j = expr.eval_jet2(&[x], 0).unwrap();
            let fd1 =
                (expr.eval(&[x + h]).unwrap() - expr.eval(&[x - h]).unwrap()) / (2.0 * h);
            assert!(
                (j.d1 - fd1).abs() <= 1e-6 * fd1.abs().max(1.0),
                "criterion 8 FAIL: d1 {} vs fd {} for `{src}` at {x}",
                j.d1,
                fd1
            );
            let fd2 = (expr.eval_jet2(&[x + h], 0).unwrap().d1
                - expr.eval_jet2(&[x - h], 0).unwrap().d1)
                / (2.0 * h);
            assert!(
                (j.d2 - fd2).abs() <= 1e-6 * fd2.abs().max(1.0),
                "criterion 8 FAIL: d2 {} vs fd {} for `{src}` at {x}",
                j.d2,
                fd2
            );
        }
        // print/parse round trip
        let printed = expr.to_string();
        let reparsed = warpgeom::Expr::parse(&printed, &["u"]).unwrap();
        for &x in &probes {
            let a = expr.eval_jet2(&[x], 0).unwrap();
            let b = reparsed.eval_jet2(&[x], 0).unwrap();
            assert!(
                (a.v - b.v).abs() <= 1e-12 * (1.0 + a.v.abs()),
                "criterion 8 FAIL: round trip of `{src}` -> `{printed}`"
            );
        }
    }
    println!("[acceptance] criterion 8: PASS (100 random expressions, jets vs FD ≤ 1e-6 relative)");
}

#[test]
fn criterion_9_reports_are_deterministic() {
    let bin = env!("CARGO_BIN_EXE_warpgeom");
    for args in [
        vec!["verify", "--scenario", "example1"],
        vec!["verify", "--scenario", "example2"],
        vec!["reconstruct", "--scenario", "example1", "--b0", "paper"],
    ] {
        let run = || {
            Command::new(bin)
                .args(&args)
                .output()
                .expect("binary runs")
        };
        let a = run();
        let b = run();
        assert_eq!(
            a.stdout, b.stdout,
            "criterion 9 FAIL: {args:?} produced differing reports"
        );
        assert!(!a.stdout.is_empty());
    }
    println!("[acceptance] criterion 9: PASS (byte-identical reports across repeated runs)");
}
