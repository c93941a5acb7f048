//! Rectangular chart grids and finite-difference stencils.
//!
//! Grids are uniform per axis with chart dimension 2 or 3. First derivatives
//! use 2nd-order central stencils at interior nodes and 2nd-order one-sided
//! stencils at the boundary. A 4th-order variant exists for the
//! reconstruction verifier, where quantities derived from twice-differenced
//! fields must stay well below the residual tolerances being certified.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, count: usize) -> Axis {
        Axis { min, max, count }
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / ((self.count - 1) as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartGrid {
    axes: Vec<Axis>,
    /// strides[d] = flat-index step when axis d advances by one node
    strides: Vec<usize>,
    len: usize,
}

impl ChartGrid {
    pub fn new(axes: Vec<Axis>) -> Result<ChartGrid> {
        if axes.len() < 2 || axes.len() > 3 {
            return Err(Error::Grid(format!(
                "chart dimension must be 2 or 3, got {}",
                axes.len()
            )));
        }
        for (d, ax) in axes.iter().enumerate() {
            if ax.count < 5 {
                return Err(Error::Grid(format!(
                    "axis {d} needs at least 5 nodes (2nd-order stencils need margins), got {}",
                    ax.count
                )));
            }
            if !(ax.max > ax.min) || !ax.min.is_finite() || !ax.max.is_finite() {
                return Err(Error::Grid(format!(
                    "axis {d} has invalid bounds [{}, {}]",
                    ax.min, ax.max
                )));
            }
        }
        let dim = axes.len();
        let mut strides = vec![0usize; dim];
        let mut s = 1usize;
        for d in (0..dim).rev() {
            strides[d] = s;
            s *= axes[d].count;
        }
        Ok(ChartGrid {
            axes,
            strides,
            len: s,
        })
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.axes[axis].spacing()
    }

    pub fn max_spacing(&self) -> f64 {
        self.axes
            .iter()
            .map(|a| a.spacing())
            .fold(0.0f64, f64::max)
    }

    pub fn index(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .zip(&self.strides)
            .map(|(i, s)| i * s)
            .sum()
    }

    pub fn multi(&self, node: usize) -> Vec<usize> {
        let mut rest = node;
        self.strides
            .iter()
            .zip(&self.axes)
            .map(|(s, _)| {
                let i = rest / s;
                rest %= s;
                i
            })
            .collect()
    }

    pub fn coord(&self, node: usize, axis: usize) -> f64 {
        let i = (node / self.strides[axis]) % self.axes[axis].count;
        self.axes[axis].min + self.axes[axis].spacing() * (i as f64)
    }

    pub fn coords(&self, node: usize) -> Vec<f64> {
        (0..self.dim()).map(|d| self.coord(node, d)).collect()
    }

    pub fn axis_pos(&self, node: usize, axis: usize) -> usize {
        (node / self.strides[axis]) % self.axes[axis].count
    }

    /// Neighbor one node over along `axis` (`step` = ±1), if it exists.
    pub fn neighbor(&self, node: usize, axis: usize, step: isize) -> Option<usize> {
        let i = self.axis_pos(node, axis) as isize + step;
        if i < 0 || i >= self.axes[axis].count as isize {
            return None;
        }
        Some((node as isize + step * self.strides[axis] as isize) as usize)
    }

    pub fn nodes(&self) -> std::ops::Range<usize> {
        0..self.len
    }

    /// True when every axis position is at least `margin` from the boundary;
    /// residual reports only use interior nodes so that one-sided stencils do
    /// not pollute the quoted maxima.
    pub fn is_interior(&self, node: usize, margin: usize) -> bool {
        (0..self.dim()).all(|d| {
            let i = self.axis_pos(node, d);
            i >= margin && i + margin < self.axes[d].count
        })
    }

    pub fn interior_nodes(&self, margin: usize) -> Vec<usize> {
        self.nodes()
            .filter(|&n| self.is_interior(n, margin))
            .collect()
    }

    /// 2nd-order first derivative of a per-node scalar field along `axis`.
    pub fn partial(&self, field: &[f64], axis: usize) -> Vec<f64> {
        self.partial_strided(field, 1, 0, axis)
    }

    /// Like [`partial`](Self::partial) but on interleaved data with the given
    /// `stride` and component offset `comp`. Output is a plain per-node field.
    pub fn partial_strided(
        &self,
        data: &[f64],
        stride: usize,
        comp: usize,
        axis: usize,
    ) -> Vec<f64> {
        debug_assert_eq!(data.len(), self.len * stride);
        let h = self.spacing(axis);
        let count = self.axes[axis].count;
        let s = self.strides[axis];
        let at = |n: usize| data[n * stride + comp];
        (0..self.len)
            .map(|n| {
                let i = self.axis_pos(n, axis);
                if i == 0 {
                    (-3.0 * at(n) + 4.0 * at(n + s) - at(n + 2 * s)) / (2.0 * h)
                } else if i == count - 1 {
                    (3.0 * at(n) - 4.0 * at(n - s) + at(n - 2 * s)) / (2.0 * h)
                } else {
                    (at(n + s) - at(n - s)) / (2.0 * h)
                }
            })
            .collect()
    }

    /// 4th-order central first derivative where margins allow; falls back to
    /// the 2nd-order stencils near the boundary.
    pub fn partial4_strided(
        &self,
        data: &[f64],
        stride: usize,
        comp: usize,
        axis: usize,
    ) -> Vec<f64> {
        debug_assert_eq!(data.len(), self.len * stride);
        let h = self.spacing(axis);
        let count = self.axes[axis].count;
        let s = self.strides[axis];
        let at = |n: usize| data[n * stride + comp];
        let second_order = self.partial_strided(data, stride, comp, axis);
        (0..self.len)
            .map(|n| {
                let i = self.axis_pos(n, axis);
                if i >= 2 && i + 2 < count {
                    (at(n - 2 * s) - 8.0 * at(n - s) + 8.0 * at(n + s) - at(n + 2 * s))
                        / (12.0 * h)
                } else {
                    second_order[n]
                }
            })
            .collect()
    }

    /// 4th-order second derivative `∂_d ∂_e` in a single pure-central
    /// application (5-point stencil on one axis, 5×5 tensor product of the
    /// first-derivative weights for mixed axes). Only meaningful at nodes
    /// with margin ≥ 2; boundary-adjacent nodes get 0 — chaining one-sided
    /// first differences there would pollute interior values at order 1.
    pub fn second4_strided(
        &self,
        data: &[f64],
        stride: usize,
        comp: usize,
        d: usize,
        e: usize,
    ) -> Vec<f64> {
        debug_assert_eq!(data.len(), self.len * stride);
        let at = |n: usize| data[n * stride + comp];
        let mut out = vec![0.0; self.len];
        if d == e {
            let h = self.spacing(d);
            let s = self.strides[d];
            let count = self.axes[d].count;
            for n in 0..self.len {
                let i = self.axis_pos(n, d);
                if i >= 2 && i + 2 < count {
                    out[n] = (-at(n - 2 * s) + 16.0 * at(n - s) - 30.0 * at(n)
                        + 16.0 * at(n + s)
                        - at(n + 2 * s))
                        / (12.0 * h * h);
                }
            }
        } else {
            let w = [1.0, -8.0, 0.0, 8.0, -1.0];
            let hd = 12.0 * self.spacing(d);
            let he = 12.0 * self.spacing(e);
            let sd = self.strides[d] as isize;
            let se = self.strides[e] as isize;
            for n in 0..self.len {
                let id = self.axis_pos(n, d);
                let ie = self.axis_pos(n, e);
                if id < 2
                    || id + 2 >= self.axes[d].count
                    || ie < 2
                    || ie + 2 >= self.axes[e].count
                {
                    continue;
                }
                let mut sum = 0.0;
                for (a, wa) in w.iter().enumerate() {
                    if *wa == 0.0 {
                        continue;
                    }
                    for (b, wb) in w.iter().enumerate() {
                        if *wb == 0.0 {
                            continue;
                        }
                        let k = (n as isize + (a as isize - 2) * sd + (b as isize - 2) * se)
                            as usize;
                        sum += wa * wb * at(k);
                    }
                }
                out[n] = sum / (hd * he);
            }
        }
        out
    }
}

/// Ordered coordinate pairs `(d, e)` with `d < e` used to store 2-forms.
pub fn pair_list(dim: usize) -> &'static [(usize, usize)] {
    match dim {
        2 => &[(0, 1)],
        3 => &[(0, 1), (0, 2), (1, 2)],
        _ => panic!("chart dimension must be 2 or 3"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid2(n: usize) -> ChartGrid {
        ChartGrid::new(vec![Axis::new(0.0, 1.0, n), Axis::new(-1.0, 1.0, n)]).unwrap()
    }

    #[test]
    fn rejects_small_axes() {
        assert!(ChartGrid::new(vec![Axis::new(0.0, 1.0, 4), Axis::new(0.0, 1.0, 8)]).is_err());
    }

    #[test]
    fn index_round_trip() {
        let g = ChartGrid::new(vec![
            Axis::new(0.0, 1.0, 5),
            Axis::new(0.0, 1.0, 6),
            Axis::new(0.0, 1.0, 7),
        ])
        .unwrap();
        for n in g.nodes() {
            assert_eq!(g.index(&g.multi(n)), n);
        }
    }

    #[test]
    fn derivative_of_smooth_field_is_second_order() {
        let f = |u: f64, v: f64| (2.0 * u).sin() * v.cosh();
        let fu = |u: f64, v: f64| 2.0 * (2.0 * u).cos() * v.cosh();
        let mut errs = Vec::new();
        for n in [21usize, 41] {
            let g = grid2(n);
            let field: Vec<f64> = g
                .nodes()
                .map(|k| f(g.coord(k, 0), g.coord(k, 1)))
                .collect();
            let du = g.partial(&field, 0);
            let err = g
                .interior_nodes(1)
                .iter()
                .map(|&k| (du[k] - fu(g.coord(k, 0), g.coord(k, 1))).abs())
                .fold(0.0f64, f64::max);
            errs.push(err);
        }
        let ratio = errs[0] / errs[1];
        assert!(
            (3.5..=4.5).contains(&ratio),
            "expected 2nd-order convergence, ratio {ratio}"
        );
    }

    #[test]
    fn fourth_order_is_much_tighter() {
        let g = grid2(41);
        let field: Vec<f64> = g
            .nodes()
            .map(|k| (g.coord(k, 0)).sin() * (g.coord(k, 1)).cos())
            .collect();
        let d2 = g.partial_strided(&field, 1, 0, 0);
        let d4 = g.partial4_strided(&field, 1, 0, 0);
        let exact = |k: usize| (g.coord(k, 0)).cos() * (g.coord(k, 1)).cos();
        let e2 = g
            .interior_nodes(2)
            .iter()
            .map(|&k| (d2[k] - exact(k)).abs())
            .fold(0.0f64, f64::max);
        let e4 = g
            .interior_nodes(2)
            .iter()
            .map(|&k| (d4[k] - exact(k)).abs())
            .fold(0.0f64, f64::max);
        assert!(e4 < e2 / 50.0, "e2 = {e2:.3e}, e4 = {e4:.3e}");
    }
}
