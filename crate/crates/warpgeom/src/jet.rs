//! Second-order forward-mode jets.
//!
//! A [`Jet2`] carries a value together with exact first and second
//! derivatives with respect to one chosen variable. Arithmetic implements the
//! Leibniz and chain rules, so derivatives are exact to machine rounding
//! rather than finite-difference approximations.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Denominators smaller than this are treated as a hard error instead of
/// letting a near-inf value poison whole residual fields.
pub const DIV_GUARD: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn constant(v: f64) -> Self {
        Jet2 { v, d1: 0.0, d2: 0.0 }
    }

    /// Seed for the active variable: d/dx x = 1, d²/dx² x = 0.
    pub const fn variable(v: f64) -> Self {
        Jet2 { v, d1: 1.0, d2: 0.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    /// Chain rule for a scalar function given by its value and first two
    /// derivatives at `self.v`.
    fn lift(self, f: f64, df: f64, ddf: f64) -> Jet2 {
        Jet2 {
            v: f,
            d1: df * self.d1,
            d2: ddf * self.d1 * self.d1 + df * self.d2,
        }
    }

    /// Composition `outer ∘ inner` where `outer` is the jet of a function of
    /// `t` evaluated at `t = inner.v`.
    pub fn compose(outer: Jet2, inner: Jet2) -> Jet2 {
        inner.lift(outer.v, outer.d1, outer.d2)
    }

    pub fn sin(self) -> Jet2 {
        self.lift(self.v.sin(), self.v.cos(), -self.v.sin())
    }

    pub fn cos(self) -> Jet2 {
        self.lift(self.v.cos(), -self.v.sin(), -self.v.cos())
    }

    pub fn sinh(self) -> Jet2 {
        self.lift(self.v.sinh(), self.v.cosh(), self.v.sinh())
    }

    pub fn cosh(self) -> Jet2 {
        self.lift(self.v.cosh(), self.v.sinh(), self.v.cosh())
    }

    pub fn exp(self) -> Jet2 {
        let e = self.v.exp();
        self.lift(e, e, e)
    }

    pub fn sqrt(self) -> Result<Jet2> {
        if self.v < 0.0 {
            return Err(Error::NegativeSqrt {
                arg: self.v,
                context: "sqrt".into(),
            });
        }
        let r = self.v.sqrt();
        if r < DIV_GUARD {
            return Err(Error::DivisionByZero {
                context: "sqrt derivative at zero".into(),
            });
        }
        Ok(self.lift(r, 0.5 / r, -0.25 / (r * r * r)))
    }

    pub fn div(self, rhs: Jet2) -> Result<Jet2> {
        if rhs.v.abs() < DIV_GUARD {
            return Err(Error::DivisionByZero { context: "div".into() });
        }
        let v = self.v / rhs.v;
        let d1 = (self.d1 - v * rhs.d1) / rhs.v;
        let d2 = (self.d2 - 2.0 * d1 * rhs.d1 - v * rhs.d2) / rhs.v;
        Ok(Jet2 { v, d1, d2 })
    }

    /// `self` raised to a constant exponent.
    pub fn powc(self, e: f64) -> Result<Jet2> {
        if e == 0.0 {
            return Ok(Jet2::constant(1.0));
        }
        let is_int = e.fract() == 0.0;
        if self.v < 0.0 && !is_int {
            return Err(Error::NegativeSqrt {
                arg: self.v,
                context: format!("pow with fractional exponent {e}"),
            });
        }
        if self.v.abs() < DIV_GUARD && e < 2.0 && e != 1.0 {
            // derivatives of x^e blow up at 0 for e < 2 (except e = 1)
            return Err(Error::DivisionByZero {
                context: format!("pow({e}) derivative at zero"),
            });
        }
        let f = self.v.powf(e);
        let df = e * self.v.powf(e - 1.0);
        let ddf = e * (e - 1.0) * self.v.powf(e - 2.0);
        Ok(self.lift(f, df, if e == 1.0 { 0.0 } else { ddf }))
    }

    pub fn recip(self) -> Result<Jet2> {
        Jet2::constant(1.0).div(self)
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, rhs: Jet2) -> Jet2 {
        Jet2 {
            v: self.v + rhs.v,
            d1: self.d1 + rhs.d1,
            d2: self.d2 + rhs.d2,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: Jet2) -> Jet2 {
        Jet2 {
            v: self.v - rhs.v,
            d1: self.d1 - rhs.d1,
            d2: self.d2 - rhs.d2,
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: Jet2) -> Jet2 {
        Jet2 {
            v: self.v * rhs.v,
            d1: self.d1 * rhs.v + self.v * rhs.d1,
            d2: self.d2 * rhs.v + 2.0 * self.d1 * rhs.d1 + self.v * rhs.d2,
        }
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, s: f64) -> Jet2 {
        Jet2 {
            v: self.v * s,
            d1: self.d1 * s,
            d2: self.d2 * s,
        }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            v: -self.v,
            d1: -self.d1,
            d2: -self.d2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(v: f64) -> Jet2 {
        Jet2::variable(v)
    }

    #[test]
    fn leibniz_rule_is_exact() {
        let f = Jet2 { v: 1.3, d1: -0.7, d2: 2.1 };
        let g = Jet2 { v: -2.4, d1: 0.9, d2: 0.3 };
        let p = f * g;
        assert_eq!(p.d1, f.d1 * g.v + f.v * g.d1);
        assert_eq!(p.d2, f.d2 * g.v + 2.0 * f.d1 * g.d1 + f.v * g.d2);
    }

    #[test]
    fn chain_rule_through_compose() {
        // a(t) = cosh t composed with h(v) at v where h = v², i.e. a(h(v)).
        let v = 0.7;
        let h = var(v) * var(v);
        let a = Jet2 {
            v: h.v.cosh(),
            d1: h.v.sinh(),
            d2: h.v.cosh(),
        };
        let c = Jet2::compose(a, h);
        let hv = v * v;
        assert!((c.v - hv.cosh()).abs() < 1e-15);
        assert!((c.d1 - hv.sinh() * 2.0 * v).abs() < 1e-14);
        let d2 = hv.cosh() * (2.0 * v) * (2.0 * v) + hv.sinh() * 2.0;
        assert!((c.d2 - d2).abs() < 1e-14);
    }

    #[test]
    fn division_matches_quotient_rule() {
        let f = var(1.5).sin();
        let g = var(1.5).cosh();
        let q = f.div(g).unwrap();
        let x: f64 = 1.5;
        let qv = x.sin() / x.cosh();
        let q1 = (x.cos() * x.cosh() - x.sin() * x.sinh()) / (x.cosh() * x.cosh());
        assert!((q.v - qv).abs() < 1e-15);
        assert!((q.d1 - q1).abs() < 1e-15);
    }

    #[test]
    fn sqrt_jet_values() {
        // sqrt(1 + u²) at u = 1: (√2, 1/√2, 2^{-3/2})
        let u = var(1.0);
        let r = (Jet2::constant(1.0) + u * u).sqrt().unwrap();
        assert!((r.v - 1.4142135623730951).abs() < 1e-15);
        assert!((r.d1 - 0.7071067811865476).abs() < 1e-15);
        assert!((r.d2 - 0.3535533905932738).abs() < 1e-15);
    }

    #[test]
    fn guards_fire() {
        assert!(matches!(
            Jet2::constant(-1.0).sqrt(),
            Err(Error::NegativeSqrt { .. })
        ));
        assert!(matches!(
            var(1.0).div(Jet2::constant(0.0)),
            Err(Error::DivisionByZero { .. })
        ));
    }

    #[test]
    fn pow_constant_exponent() {
        let u = var(2.0);
        let p = u.powc(3.0).unwrap();
        assert!((p.v - 8.0).abs() < 1e-14);
        assert!((p.d1 - 12.0).abs() < 1e-14);
        assert!((p.d2 - 12.0).abs() < 1e-14);
    }
}
