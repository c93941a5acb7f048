//! Helicoidal surface in the warped product `I ×_a H²` (ε = +1, c = −1):
//! `χ(u,v) = (√(1+u²), u sin(κv), u cos(κv), h(v))` in the axis order where
//! slot 0 carries the negative fiber sign. Requires `h′ > 0` and `u > 0` on
//! the chart.

use crate::ambient::SignatureData;
use crate::calculus::{MatrixOneForm, MetricField};
use crate::error::{Error, Result};
use crate::grid::ChartGrid;
use crate::jet::Jet2;
use crate::scalar_field::ScalarField1D;
use crate::surface::{AnalyticDerivs, FrameField, FrameMatrixField, HypersurfaceData, RhoFields};

use super::{Scenario, ScenarioOracle};

pub fn helicoid(
    a: &ScalarField1D,
    h: &ScalarField1D,
    c_const: f64,
    grid: ChartGrid,
) -> Result<Scenario> {
    if grid.dim() != 2 {
        return Err(Error::Scenario("helicoid scenario needs a 2D chart".into()));
    }
    if c_const == 0.0 {
        return Err(Error::Scenario("the pitch constant must be nonzero".into()));
    }
    if grid.axes()[0].min <= 0.0 {
        return Err(Error::Scenario(
            "the chart must stay at u > 0 (the frame degenerates at the axis)".into(),
        ));
    }
    let n = 2usize;
    let m = 4usize;
    let k = c_const;
    let signs = SignatureData::new(2, 0, -1.0, 1.0, &[1.0, 1.0], 1.0)?;

    // sample h along the v-axis, validate h′ > 0, and find the warp range
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for node in grid.nodes() {
        let v = grid.coord(node, 1);
        let hj = h.eval_jet(v)?;
        if hj.d1 <= 0.0 {
            return Err(Error::Scenario(format!(
                "h′ > 0 violated at v = {v}: h′ = {}",
                hj.d1
            )));
        }
        lo = lo.min(hj.v);
        hi = hi.max(hj.v);
    }
    let pad = 1e-6 * (hi - lo).max(1.0);
    if lo - pad < a.domain.0 || hi + pad > a.domain.1 {
        return Err(Error::Scenario(format!(
            "π-range [{lo}, {hi}] leaves the warp domain [{}, {}]",
            a.domain.0, a.domain.1
        )));
    }
    // positivity of the warp over the range the surface actually visits
    {
        let probe = ScalarField1D::new(&a.expr_text(), a.var(), (lo - pad, hi + pad))?;
        probe.check_positive(4 * grid.axes()[1].count)?;
    }
    let warp = ScalarField1D::new(&a.expr_text(), a.var(), (lo - pad, hi + pad))?;

    let mut metric = MetricField::zeros(&grid);
    let mut frame = FrameField::zeros(&grid);
    let mut shape = FrameMatrixField::zeros(&grid);
    let mut t_frame = vec![0.0; grid.len() * n];
    let mut t_normal = vec![0.0; grid.len()];
    let mut pi = vec![0.0; grid.len()];
    let mut metric_d1 = vec![0.0; grid.len() * n * n * n];
    let mut frame_d1 = vec![0.0; grid.len() * n * n * n];
    let mut rho = vec![0.0; grid.len()];
    let mut rho_t = vec![0.0; grid.len()];
    let mut rho_b = vec![0.0; grid.len()];

    let mut b_field = vec![0.0; grid.len() * m * m];
    let mut chi = vec![0.0; grid.len() * m];
    let mut upsilon = MatrixOneForm::zeros(&grid, m);
    let mut omega = MatrixOneForm::zeros(&grid, m);
    let mut x = MatrixOneForm::zeros(&grid, m);

    for node in grid.nodes() {
        let u = grid.coord(node, 0);
        let v = grid.coord(node, 1);
        let hj = h.eval_jet(v)?;
        let at = a.eval_jet(hj.v)?; // (a, a′, a″) at t = h(v)

        // u-seeded pass: v-dependent quantities are constants
        let (guu_u, gvv_u, e1u_u, e2v_u) = {
            let uj = Jet2::variable(u);
            let av = Jet2::constant(at.v);
            let hp = Jet2::constant(hj.d1);
            let p2 = Jet2::constant(1.0) + uj * uj;
            let d = (uj * av * k) * (uj * av * k) + hp * hp;
            let g_uu = (av * av).div(p2)?;
            let e1u = p2.sqrt()?.div(av)?;
            let e2v = d.powc(-0.5)?;
            (g_uu, d, e1u, e2v)
        };
        // v-seeded pass: u constant; second slots of the derived jets for
        // a′∘h and h′ would need third derivatives, so only values and first
        // derivatives of composites may be read (and that is all we read).
        let (guu_v, gvv_v, e1u_v, e2v_v) = {
            let av = Jet2::compose(at, hj);
            let hp = Jet2 { v: hj.d1, d1: hj.d2, d2: 0.0 };
            let uc = Jet2::constant(u);
            let p2 = Jet2::constant(1.0 + u * u);
            let d = (uc * av * k) * (uc * av * k) + hp * hp;
            let g_uu = (av * av).div(p2)?;
            let e1u = p2.sqrt()?.div(av)?;
            let e2v = d.powc(-0.5)?;
            (g_uu, d, e1u, e2v)
        };

        let gm = metric.at_mut(node);
        gm[0] = guu_u.v;
        gm[3] = gvv_u.v;
        metric_d1[node * 8] = guu_u.d1; // ∂_u g_uu
        metric_d1[node * 8 + 3] = gvv_u.d1; // ∂_u g_vv
        metric_d1[node * 8 + 4] = guu_v.d1; // ∂_v g_uu
        metric_d1[node * 8 + 7] = gvv_v.d1; // ∂_v g_vv

        frame.vector_mut(node, 0)[0] = e1u_u.v;
        frame.vector_mut(node, 1)[1] = e2v_u.v;
        frame_d1[node * 8] = e1u_u.d1; // ∂_u e₁^u
        frame_d1[node * 8 + 3] = e2v_u.d1; // ∂_u e₂^v
        frame_d1[node * 8 + 4] = e1u_v.d1; // ∂_v e₁^u
        frame_d1[node * 8 + 7] = e2v_v.d1; // ∂_v e₂^v

        let (av, ap, app) = (at.v, at.d1, at.d2);
        let (hv, hp, hpp) = (hj.v, hj.d1, hj.d2);
        let p = (1.0 + u * u).sqrt();
        let dval = k * k * u * u * av * av + hp * hp;
        let sd = dval.sqrt();

        // shape operator from the ω_{i3} connection forms
        let am = shape.at_mut(node);
        am[0] = -k * u * ap / sd;
        am[1] = -k * p * hp / dval;
        am[2] = am[1];
        am[3] = -k * u * (ap * (k * k * u * u * av * av + 2.0 * hp * hp) - av * hpp)
            / (dval * sd);

        t_frame[node * n + 1] = hp / sd;
        t_normal[node] = k * u * av / sd;
        pi[node] = hv;
        rho[node] = av;
        rho_t[node] = ap;
        rho_b[node] = app;

        let (skv, ckv) = ((k * v).sin(), (k * v).cos());
        let rows: [[f64; 4]; 4] = [
            [-p, -u, 0.0, 0.0],
            [u * skv, p * skv, k * u * av * ckv / sd, -ckv * hp / sd],
            [u * ckv, p * ckv, -k * u * av * skv / sd, skv * hp / sd],
            [0.0, 0.0, hp / sd, k * u * av / sd],
        ];
        for (r, row) in rows.iter().enumerate() {
            b_field[node * 16 + r * 4..node * 16 + r * 4 + 4].copy_from_slice(row);
        }
        chi[node * 4] = p;
        chi[node * 4 + 1] = u * skv;
        chi[node * 4 + 2] = u * ckv;
        chi[node * 4 + 3] = hv;

        // the (2,3) entry sign is fixed by Υ = B⁻¹dB of the frame matrix
        // above and by Ω = Υ + 𝐗 (both pin it to +κah′/D on du)
        set(upsilon.block_mut(node, 0), m, &[
            (0, 1, 1.0 / p),
            (1, 0, 1.0 / p),
            (2, 3, k * av * hp / dval),
            (3, 2, -k * av * hp / dval),
        ]);
        set(upsilon.block_mut(node, 1), m, &[
            (0, 2, k * k * u * u * av / sd),
            (2, 0, k * k * u * u * av / sd),
            (0, 3, -k * u * hp / sd),
            (3, 0, -k * u * hp / sd),
            (1, 2, -k * k * u * p * av / sd),
            (2, 1, k * k * u * p * av / sd),
            (1, 3, k * p * hp / sd),
            (3, 1, -k * p * hp / sd),
            (2, 3, k * u * (ap * hp * hp - av * hpp) / dval),
            (3, 2, -k * u * (ap * hp * hp - av * hpp) / dval),
        ]);
        set(x.block_mut(node, 0), m, &[
            (1, 2, ap * hp / (p * sd)),
            (2, 1, -ap * hp / (p * sd)),
            (1, 3, k * u * av * ap / (p * sd)),
            (3, 1, -k * u * av * ap / (p * sd)),
        ]);
        set(x.block_mut(node, 1), m, &[(2, 3, k * u * ap), (3, 2, -k * u * ap)]);
        for d in 0..n {
            let (ub, xb) = (upsilon.block(node, d).to_vec(), x.block(node, d).to_vec());
            let ob = omega.block_mut(node, d);
            for c in 0..m * m {
                ob[c] = ub[c] + xb[c];
            }
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
        warp,
        analytic: Some(AnalyticDerivs {
            metric_d1,
            frame_d1,
        }),
        rho: Some(RhoFields { rho, rho_t, rho_b }),
    };
    data.validate()?;
    Ok(Scenario {
        name: "example2",
        data,
        oracle: Some(ScenarioOracle {
            b: b_field,
            upsilon,
            omega,
            x,
            chi,
        }),
    })
}

fn set(block: &mut [f64], m: usize, entries: &[(usize, usize, f64)]) {
    for &(a, b, v) in entries {
        block[a * m + b] = v;
    }
}
