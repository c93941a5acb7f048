//! Rest slice `{t₀} × M(c)` of a Robertson-Walker warped product
//! `−I ×_a M(c)`: T ≡ 0, π ≡ t₀, and condition (C) with T = 0 forces the
//! umbilic shape operator `A = −ε_{n+1} T_{n+1} (a′/a) · Id`. The sign of
//! `T_{n+1} ∈ {−1, +1}` is an orientation choice of the normal; the default
//! −1 makes the graph scenario with constant h degenerate to this one
//! field-for-field.
//!
//! Both 2- and 3-dimensional charts are supported: polar coordinates
//! `(u, v)` resp. `(u, v, w)` on the round or hyperbolic fiber, with
//! profile `S(u) = sin u` resp. `sinh u`, metric
//! `a₀²(du² + S²dv² [+ S² sin²v dw²])`.

use crate::ambient::SignatureData;
use crate::calculus::MetricField;
use crate::error::{Error, Result};
use crate::grid::ChartGrid;
use crate::jet::Jet2;
use crate::scalar_field::ScalarField1D;
use crate::surface::{AnalyticDerivs, FrameField, FrameMatrixField, HypersurfaceData};

use super::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fiber {
    Sphere,
    Hyperbolic,
}

pub fn slice(
    t0: f64,
    a: &ScalarField1D,
    fiber: Fiber,
    t_normal_sign: f64,
    grid: ChartGrid,
) -> Result<Scenario> {
    let n = grid.dim();
    if t_normal_sign != 1.0 && t_normal_sign != -1.0 {
        return Err(Error::Scenario("T_{n+1} sign must be ±1".into()));
    }
    let c = match fiber {
        Fiber::Sphere => 1.0,
        Fiber::Hyperbolic => -1.0,
    };
    if fiber == Fiber::Hyperbolic && grid.axes()[0].min <= 0.0 {
        return Err(Error::Scenario(
            "hyperbolic chart must stay at u > 0 (sinh u > 0)".into(),
        ));
    }
    let signs = SignatureData::new(n, 0, c, -1.0, &vec![1.0; n], -1.0)?;
    let a0 = a.eval_jet(t0)?;
    if a0.v <= 0.0 {
        return Err(Error::NonPositiveWarp {
            name: a.expr_text(),
            at: t0,
            value: a0.v,
        });
    }
    // A = −ε_{n+1} T_{n+1} (a′/a) Id; with ε_{n+1} = −1 this is
    // T_{n+1}·(a′/a) Id.
    let lambda = -signs.eps_normal() * t_normal_sign * a0.d1 / a0.v;

    let mut metric = MetricField::zeros(&grid);
    let mut frame = FrameField::zeros(&grid);
    let mut shape = FrameMatrixField::zeros(&grid);
    let t_frame = vec![0.0; grid.len() * n];
    let t_normal = vec![t_normal_sign; grid.len()];
    let pi = vec![t0; grid.len()];
    let mut metric_d1 = vec![0.0; grid.len() * n * n * n];
    let mut frame_d1 = vec![0.0; grid.len() * n * n * n];

    let a2 = a0.v * a0.v;
    for node in grid.nodes() {
        let u = grid.coord(node, 0);
        let uj = Jet2::variable(u);
        // radial fiber profile: sin u for the sphere, sinh u hyperbolic
        let s = match fiber {
            Fiber::Sphere => uj.sin(),
            Fiber::Hyperbolic => uj.sinh(),
        };
        if s.v <= 0.0 {
            return Err(Error::Scenario(format!(
                "fiber profile vanishes at u = {u}"
            )));
        }
        let gm = metric.at_mut(node);
        gm[0] = a2;
        gm[n + 1] = a2 * s.v * s.v;
        // ∂_u g_vv
        metric_d1[node * n * n * n + n + 1] = a2 * 2.0 * s.v * s.d1;

        frame.vector_mut(node, 0)[0] = 1.0 / a0.v;
        let e2v = (s * a0.v).recip()?;
        frame.vector_mut(node, 1)[1] = e2v.v;
        // ∂_u e₂^v lives at [d = 0][i = 1][q = 1]
        frame_d1[node * n * n * n + n + 1] = e2v.d1;

        if n == 3 {
            let v = grid.coord(node, 1);
            let vj = Jet2::variable(v);
            let sv = vj.sin();
            if sv.v <= 0.0 {
                return Err(Error::Scenario(format!(
                    "polar angle leaves (0, π) at v = {v}"
                )));
            }
            gm[2 * n + 2] = a2 * s.v * s.v * sv.v * sv.v;
            // ∂_u g_ww and ∂_v g_ww
            metric_d1[node * n * n * n + 2 * n + 2] =
                a2 * 2.0 * s.v * s.d1 * sv.v * sv.v;
            metric_d1[node * n * n * n + n * n + 2 * n + 2] =
                a2 * s.v * s.v * 2.0 * sv.v * sv.d1;
            // e₃ = ∂w / (a₀ S sin v)
            let u_part = (s * a0.v).recip()?; // d/du of 1/(a₀S) with sin v fixed
            let e3w = u_part.v / sv.v;
            frame.vector_mut(node, 2)[2] = e3w;
            // ∂_u e₃^w at [0][2][2], ∂_v e₃^w at [1][2][2]
            frame_d1[node * n * n * n + 2 * n + 2] = u_part.d1 / sv.v;
            frame_d1[node * n * n * n + n * n + 2 * n + 2] =
                -u_part.v * sv.d1 / (sv.v * sv.v);
        }

        let am = shape.at_mut(node);
        for i in 0..n {
            am[i * n + i] = lambda;
        }
    }

    let data = HypersurfaceData {
        grid,
        signs,
        metric,
        frame,
        shape,
        t_frame,
        t_normal,
        pi,
        warp: a.clone(),
        analytic: Some(AnalyticDerivs {
            metric_d1,
            frame_d1,
        }),
        rho: None,
    };
    data.validate()?;
    Ok(Scenario {
        name: "slice",
        data,
        oracle: None,
    })
}
