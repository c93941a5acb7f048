//! Built-in worked scenarios: fully populated hypersurface data plus
//! closed-form oracle fields (B, Ω, 𝐗, Υ, χ) for golden tests.
//!
//! Sign conventions shared by all scenarios are documented in
//! `docs/scenarios.md`: ambient axis α carries the metric sign ε_α, the
//! fiber normal is `e₀ = Ξ/a`, and the frame orientation of each scenario is
//! fixed by its closed-form B matrix (whose T-row must satisfy the norm
//! identity (B) — this pins the sign of `T_{n+1}` and with it the sign of
//! the shape operator derived from the `ω_{i,n+1}` connection forms).

mod graph_sphere;
mod helicoid;
mod slice;

pub use graph_sphere::graph_sphere;
pub use helicoid::helicoid;
pub use slice::{slice, Fiber};

use crate::calculus::MatrixOneForm;
use crate::error::{Error, Result};
use crate::grid::{Axis, ChartGrid};
use crate::scalar_field::ScalarField1D;
use crate::surface::HypersurfaceData;

/// Closed-form reference fields evaluated at every node.
#[derive(Clone, Debug)]
pub struct ScenarioOracle {
    /// frame matrix B, node-major (n+2)×(n+2)
    pub b: Vec<f64>,
    pub upsilon: MatrixOneForm,
    pub omega: MatrixOneForm,
    pub x: MatrixOneForm,
    /// immersion coordinates, node-major n+2
    pub chi: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: &'static str,
    pub data: HypersurfaceData,
    pub oracle: Option<ScenarioOracle>,
}

/// Default chart bounds of the named scenarios. The graph scenario avoids
/// sin(u) = 0 where e₂ degenerates; the helicoid stays clear of u = 0.
pub fn default_grid(name: &str, nodes: usize) -> Result<ChartGrid> {
    let pi = std::f64::consts::PI;
    match name {
        "example1" | "slice" => ChartGrid::new(vec![
            Axis::new(0.2, pi - 0.2, nodes),
            Axis::new(-pi / 2.0 + 0.1, pi / 2.0 - 0.1, nodes),
        ]),
        "example2" => ChartGrid::new(vec![
            Axis::new(0.5, 2.0, nodes),
            Axis::new(-1.0, 1.0, nodes),
        ]),
        other => Err(Error::Scenario(format!("unknown scenario `{other}`"))),
    }
}

/// Build a named scenario with its default parameters.
pub fn by_name(name: &str, nodes: usize) -> Result<Scenario> {
    let grid = default_grid(name, nodes)?;
    match name {
        "example1" => {
            let h = ScalarField1D::new("2 + 0.3*sin(u)", "u", (0.0, std::f64::consts::PI))?;
            graph_sphere(&h, grid)
        }
        "example2" => {
            let a = ScalarField1D::new("cosh(t)", "t", (-1.5, 1.5))?;
            let h = ScalarField1D::new("v", "v", (-1.2, 1.2))?;
            helicoid(&a, &h, 1.0, grid)
        }
        "slice" => {
            let a = ScalarField1D::new("t", "t", (0.1, 10.0))?;
            slice(2.0, &a, Fiber::Sphere, -1.0, grid)
        }
        other => Err(Error::Scenario(format!("unknown scenario `{other}`"))),
    }
}
