//! One-variable scalar functions with exact jets, on a closed interval.
//!
//! Houses warping functions `a(t)` (positive on their domain) and profile
//! curves `h(u)`, `h(v)`.

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::Jet2;

#[derive(Clone, Debug)]
pub struct ScalarField1D {
    expr: Expr,
    var: String,
    pub domain: (f64, f64),
}

impl ScalarField1D {
    pub fn new(source: &str, var: &str, domain: (f64, f64)) -> Result<ScalarField1D> {
        if !(domain.0 < domain.1) {
            return Err(Error::Grid(format!(
                "scalar field domain [{}, {}] is empty",
                domain.0, domain.1
            )));
        }
        let expr = Expr::parse(source, &[var])?;
        Ok(ScalarField1D {
            expr,
            var: var.to_string(),
            domain,
        })
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn expr_text(&self) -> String {
        self.expr.to_string()
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        // small slack so that values that are inside up to rounding pass
        let slack = 1e-9 * (self.domain.1 - self.domain.0).abs().max(1.0);
        if t < self.domain.0 - slack || t > self.domain.1 + slack {
            return Err(Error::OutsideDomain {
                name: self.var.clone(),
                value: t,
                min: self.domain.0,
                max: self.domain.1,
            });
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        self.expr.eval(&[t])
    }

    /// Value with exact first and second derivative at `t`.
    pub fn eval_jet(&self, t: f64) -> Result<Jet2> {
        self.check_domain(t)?;
        self.expr.eval_jet2(&[t], 0)
    }

    /// Check `value > 0` at `samples` evenly spaced points (grid resolution);
    /// required of warping functions.
    pub fn check_positive(&self, samples: usize) -> Result<()> {
        let n = samples.max(2);
        for k in 0..n {
            let t = self.domain.0 + (self.domain.1 - self.domain.0) * (k as f64) / ((n - 1) as f64);
            let v = self.eval(t)?;
            if !(v > 0.0) {
                return Err(Error::NonPositiveWarp {
                    name: self.expr_text(),
                    at: t,
                    value: v,
                });
            }
        }
        Ok(())
    }
}
