//! Full pipeline on a 3-dimensional rest slice: exercises the 5×5 frame
//! group, all six Gauss index combinations, the third sweep axis of the
//! field integrator, and the trapped-leaf masking of a T ≡ 0 chart.

use warpgeom::conditions::{box_max, run_all};
use warpgeom::frames::{build_connection_forms, flatness_residual, GatePolicy};
use warpgeom::grid::{Axis, ChartGrid};
use warpgeom::horizons::trapped_scan;
use warpgeom::reconstruct::{
    build_chi, initial_frame, integrate_field, leaf_structure, verify_immersion,
    IntegrateOptions, LeafStructure,
};
use warpgeom::scenarios::{slice, Fiber};
use warpgeom::ScalarField1D;

fn grid3(nodes: usize) -> ChartGrid {
    let pi = std::f64::consts::PI;
    ChartGrid::new(vec![
        Axis::new(0.3, pi - 0.3, nodes),
        Axis::new(0.4, pi - 0.4, nodes),
        Axis::new(-1.0, 1.0, nodes),
    ])
    .unwrap()
}

#[test]
fn structure_conditions_hold_on_the_3d_slice() {
    let a = ScalarField1D::new("t", "t", (0.1, 10.0)).unwrap();
    let coarse = slice(2.0, &a, Fiber::Sphere, -1.0, grid3(11)).unwrap();
    let fine = slice(2.0, &a, Fiber::Sphere, -1.0, grid3(21)).unwrap();
    let rc = run_all(&coarse.data).unwrap();
    let rf = run_all(&fine.data).unwrap();
    for (c, f) in rc.iter().zip(&rf) {
        if !f.fd_based {
            assert!(f.max_abs < 1e-10, "{}: {}", f.name, f.max_abs);
            continue;
        }
        let mc = box_max(&coarse.data.grid, &c.field, 0.15);
        let mf = box_max(&fine.data.grid, &f.field, 0.15);
        if mf < 1e-11 {
            continue; // the T ≡ 0 conditions are exact
        }
        // Gauss on the 3-sphere metric: six combinations, 2nd-order FD
        let order = (mc / mf).ln() / 2.0f64.ln();
        assert!(
            order > 1.5,
            "{}: order {order:.2} ({mc:.3e} -> {mf:.3e})",
            f.name
        );
    }
}

#[test]
fn reconstruction_in_five_dimensions() {
    let a = ScalarField1D::new("t", "t", (0.1, 10.0)).unwrap();
    let sc = slice(2.0, &a, Fiber::Sphere, -1.0, grid3(13)).unwrap();
    let data = &sc.data;
    assert_eq!(data.m(), 5);
    let out = build_connection_forms(data, GatePolicy::Skip).unwrap();
    assert!(out.bundle.upsilon.g_skew_residual(data.signs.g_amb()) < 1e-12);
    let flat = flatness_residual(&data.grid, &out.bundle).unwrap();
    assert!(flat.max_abs < 5e-2, "flatness {:.3e}", flat.max_abs);

    let origin = data.grid.index(&[6, 6, 6]);
    let b0 = initial_frame(data, origin).unwrap();
    assert!((b0.b.det() - 1.0).abs() < 1e-10);
    let field = integrate_field(
        &data.grid,
        &out.bundle,
        data,
        &b0,
        origin,
        IntegrateOptions::default(),
    )
    .unwrap();
    let sample = build_chi(data, &field.b, 1e-5).unwrap();
    // height is exactly t₀ and the image lies on the 3-sphere quadric
    for node in data.grid.nodes() {
        assert!((sample.chi[node * 5 + 4] - 2.0).abs() < 1e-12);
    }
    assert!(sample.quadric_max < 1e-8);
    let rep = verify_immersion(data, &sample).unwrap();
    // coarse grid: the verifier's 4th-order stencils dominate the error
    assert!(rep.isometry_max < 5e-3, "isometry {:.3e}", rep.isometry_max);
    assert!(
        rep.shape_recovery_max < 5e-2,
        "shape {:.3e}",
        rep.shape_recovery_max
    );
    assert_eq!(leaf_structure(data, 1e-8), LeafStructure::Slice);
}

#[test]
fn trapped_scan_masks_the_slice() {
    // T ≡ 0: every node is degenerate for the leaf normal split, so the
    // verdicts must come back indeterminate, never as a silent pass
    let a = ScalarField1D::new("t", "t", (0.1, 10.0)).unwrap();
    let sc = slice(2.0, &a, Fiber::Sphere, -1.0, grid3(7)).unwrap();
    let scan = trapped_scan(&sc.data, 1e-6, 1e-8).unwrap();
    assert!(scan.points.iter().all(|p| p.masked));
    assert!(scan.leaves.iter().all(|l| l.indeterminate && !l.trapped));
}

#[test]
fn hyperbolic_3d_slice_also_closes() {
    let a = ScalarField1D::new("cosh(t)", "t", (-3.0, 3.0)).unwrap();
    let grid = ChartGrid::new(vec![
        Axis::new(0.4, 1.6, 11),
        Axis::new(0.5, std::f64::consts::PI - 0.5, 11),
        Axis::new(-0.8, 0.8, 11),
    ])
    .unwrap();
    let sc = slice(0.5, &a, Fiber::Hyperbolic, -1.0, grid).unwrap();
    let reports = run_all(&sc.data).unwrap();
    for rep in reports.iter().filter(|r| !r.fd_based) {
        assert!(rep.max_abs < 1e-10, "{}: {}", rep.name, rep.max_abs);
    }
    let out = build_connection_forms(&sc.data, GatePolicy::Skip).unwrap();
    let origin = sc.data.grid.index(&[5, 5, 5]);
    let b0 = initial_frame(&sc.data, origin).unwrap();
    let field = integrate_field(
        &sc.data.grid,
        &out.bundle,
        &sc.data,
        &b0,
        origin,
        IntegrateOptions::default(),
    )
    .unwrap();
    let sample = build_chi(&sc.data, &field.b, 1e-5).unwrap();
    for node in sc.data.grid.nodes() {
        assert!((sample.chi[node * 5 + 4] - 0.5).abs() < 1e-12);
    }
}
