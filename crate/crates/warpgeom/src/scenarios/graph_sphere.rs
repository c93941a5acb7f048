//! Graph surface over a rest sphere in the warped product `−I ×_t S²`:
//! `χ(u,v) = (cos u, sin u cos v, sin u sin v, h(u))` with warping function
//! `a(t) = t`, so `a∘π = h` along the surface. Requires `h(u) > |h′(u)|`
//! (the graph stays non-degenerate) and `sin u > 0` on the chart.
//!
//! All fields depend on u alone, so the exact v-derivatives are zero.

use crate::ambient::SignatureData;
use crate::calculus::{MatrixOneForm, MetricField};
use crate::error::{Error, Result};
use crate::grid::ChartGrid;
use crate::jet::Jet2;
use crate::scalar_field::ScalarField1D;
use crate::surface::{AnalyticDerivs, FrameField, FrameMatrixField, HypersurfaceData, RhoFields};

use super::{Scenario, ScenarioOracle};

pub fn graph_sphere(h: &ScalarField1D, grid: ChartGrid) -> Result<Scenario> {
    if grid.dim() != 2 {
        return Err(Error::Scenario("graph scenario needs a 2D chart".into()));
    }
    let n = 2usize;
    let m = 4usize;
    let signs = SignatureData::new(2, 0, 1.0, -1.0, &[1.0, 1.0], -1.0)?;

    // first pass: sample h, validate admissibility, find the π-range
    let mut h_jets = Vec::with_capacity(grid.len());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for node in grid.nodes() {
        let u = grid.coord(node, 0);
        if u.sin() <= 0.0 {
            return Err(Error::Scenario(format!(
                "sin(u) ≤ 0 at u = {u}; e₂ degenerates there"
            )));
        }
        let hj = h.eval_jet(u)?;
        if hj.v <= hj.d1.abs() {
            return Err(Error::Scenario(format!(
                "h > |h′| violated at u = {u}: h = {}, h′ = {}",
                hj.v, hj.d1
            )));
        }
        lo = lo.min(hj.v);
        hi = hi.max(hj.v);
        h_jets.push(hj);
    }
    let pad = 1e-6 * (hi - lo).max(1.0);
    if lo - pad <= 0.0 {
        return Err(Error::Scenario(format!(
            "warp domain [{}, {}] leaves the positive axis",
            lo - pad,
            hi + pad
        )));
    }
    let warp = ScalarField1D::new("t", "t", (lo - pad, hi + pad))?;

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
        let hj = h_jets[node];
        // u-seeded jets; hp's own second slot would need h‴, so only values
        // and first derivatives of composites built from it may be read.
        let uj = Jet2::variable(u);
        let hvar = hj;
        let hp = Jet2 { v: hj.d1, d1: hj.d2, d2: 0.0 };
        let s = uj.sin();
        let co = uj.cos();
        let w2 = hvar * hvar - hp * hp;
        let w = w2.sqrt()?;

        // metric: g = diag(h² − h′², h² sin²u)
        let g_uu = w2;
        let g_vv = hvar * hvar * s * s;
        let gm = metric.at_mut(node);
        gm[0] = g_uu.v;
        gm[3] = g_vv.v;
        // ∂_u g (∂_v ≡ 0)
        metric_d1[node * 8] = g_uu.d1; // [d=0][0][0]
        metric_d1[node * 8 + 3] = g_vv.d1; // [d=0][1][1]

        // frame: e₁ = ∂u/W, e₂ = ∂v/(h sin u)
        let e1u = w.recip()?;
        let e2v = (hvar * s).recip()?;
        frame.vector_mut(node, 0)[0] = e1u.v;
        frame.vector_mut(node, 1)[1] = e2v.v;
        frame_d1[node * 8] = e1u.d1; // [d=0][i=0][q=0]
        frame_d1[node * 8 + 3] = e2v.d1; // [d=0][i=1][q=1]

        // shape operator from the ω_{i3} connection forms (see docs):
        // A = diag(−(h² − 2h′² + h h″)/W³, −(h′cos u + h sin u)/(h sin u W))
        let hpp = hj.d2;
        let a11 = -(hj.v * hj.v - 2.0 * hj.d1 * hj.d1 + hj.v * hpp) / (w.v * w.v * w.v);
        let a22 = -(hj.d1 * co.v + hj.v * s.v) / (hj.v * s.v * w.v);
        let am = shape.at_mut(node);
        am[0] = a11;
        am[3] = a22;

        // T = ε grad π: T₁ = −h′/W, T₂ = 0, T₃ = −h/W
        t_frame[node * n] = -hj.d1 / w.v;
        t_normal[node] = -hj.v / w.v;
        pi[node] = hj.v;

        // ρ-fields for the reformulated conditions: ρ = a∘π = h, ρ̃ = 1, ρ̄ = 0
        rho[node] = hj.v;
        rho_t[node] = 1.0;
        rho_b[node] = 0.0;

        // oracle frame matrix (rows are Ē_α-components of the e_β columns)
        let (sv, cv) = (v.sin(), v.cos());
        let (hv, hd, wv) = (hj.v, hj.d1, w.v);
        let rows: [[f64; 4]; 4] = [
            [co.v, -hv * s.v / wv, 0.0, -s.v * hd / wv],
            [s.v * cv, hv * co.v * cv / wv, -sv, co.v * cv * hd / wv],
            [s.v * sv, hv * co.v * sv / wv, cv, co.v * sv * hd / wv],
            [0.0, -hd / wv, 0.0, -hv / wv],
        ];
        for (r, row) in rows.iter().enumerate() {
            b_field[node * 16 + r * 4..node * 16 + r * 4 + 4].copy_from_slice(row);
        }
        chi[node * 4] = co.v;
        chi[node * 4 + 1] = s.v * cv;
        chi[node * 4 + 2] = s.v * sv;
        chi[node * 4 + 3] = hv;

        // closed-form Υ, 𝐗 and Ω = Υ + 𝐗
        let ups13 = (hv * hj.d2 - hd * hd) / (wv * wv);
        set(upsilon.block_mut(node, 0), m, &[
            (0, 1, -hv / wv),
            (1, 0, hv / wv),
            (0, 3, -hd / wv),
            (3, 0, -hd / wv),
            (1, 3, ups13),
            (3, 1, ups13),
        ]);
        set(upsilon.block_mut(node, 1), m, &[
            (0, 2, -s.v),
            (2, 0, s.v),
            (1, 2, -hv * co.v / wv),
            (2, 1, hv * co.v / wv),
            (2, 3, hd * co.v / wv),
            (3, 2, hd * co.v / wv),
        ]);
        set(x.block_mut(node, 0), m, &[(1, 3, 1.0), (3, 1, 1.0)]);
        set(x.block_mut(node, 1), m, &[
            (1, 2, -s.v * hd / wv),
            (2, 1, s.v * hd / wv),
            (2, 3, s.v * hv / wv),
            (3, 2, s.v * hv / wv),
        ]);
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
        name: "example1",
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
