//! Small dense square matrices for frames in the pseudo-orthogonal group.
//!
//! Everything here is sized (n+2) ≤ 5, so plain row-major `Vec<f64>` with
//! direct loops beats any external linear-algebra dependency. `G` always
//! denotes the ambient sign diagonal, passed as a slice.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SqMat {
    pub n: usize,
    pub a: Vec<f64>,
}

impl SqMat {
    pub fn zeros(n: usize) -> SqMat {
        SqMat {
            n,
            a: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> SqMat {
        let mut m = SqMat::zeros(n);
        for i in 0..n {
            m.a[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> SqMat {
        let n = rows.len();
        let mut a = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n);
            a.extend_from_slice(r);
        }
        SqMat { n, a }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, rhs: &SqMat) -> SqMat {
        let n = self.n;
        debug_assert_eq!(n, rhs.n);
        let mut out = SqMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.a[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += aik * rhs.a[k * n + j];
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> SqMat {
        let n = self.n;
        let mut out = SqMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.a[j * n + i] = self.a[i * n + j];
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> SqMat {
        SqMat {
            n: self.n,
            a: self.a.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, rhs: &SqMat) -> SqMat {
        SqMat {
            n: self.n,
            a: self
                .a
                .iter()
                .zip(&rhs.a)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &SqMat) -> SqMat {
        SqMat {
            n: self.n,
            a: self
                .a
                .iter()
                .zip(&rhs.a)
                .map(|(x, y)| x - y)
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn one_norm(&self) -> f64 {
        let n = self.n;
        (0..n)
            .map(|j| (0..n).map(|i| self.a[i * n + j].abs()).sum::<f64>())
            .fold(0.0f64, f64::max)
    }

    /// Determinant by LU with partial pivoting; n ≤ 5 keeps this exact enough.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.a.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut piv = col;
            let mut best = a[col * n + col].abs();
            for r in (col + 1)..n {
                let v = a[r * n + col].abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return 0.0;
            }
            if piv != col {
                for j in 0..n {
                    a.swap(col * n + j, piv * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in (col + 1)..n {
                let f = a[r * n + col] / p;
                for j in col..n {
                    a[r * n + j] -= f * a[col * n + j];
                }
            }
        }
        det
    }

    /// Matrix exponential by scaling-and-squaring with a Taylor series
    /// truncated once the term max-norm drops below 1e-17; for the fixed
    /// small dimensions here this is exact to rounding.
    pub fn expm(&self) -> SqMat {
        let norm = self.one_norm();
        let s = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let x = self.scale(1.0 / (1u64 << s) as f64);
        let mut result = SqMat::identity(self.n);
        let mut term = SqMat::identity(self.n);
        for k in 1..=40u32 {
            term = term.mul(&x).scale(1.0 / k as f64);
            result = result.add(&term);
            if term.max_abs() < 1e-17 {
                break;
            }
        }
        for _ in 0..s {
            result = result.mul(&result);
        }
        result
    }

    /// For members of the group `BᵀGB = G` the inverse is `G Bᵀ G`.
    pub fn g_inverse(&self, g: &[f64]) -> SqMat {
        let n = self.n;
        let mut out = SqMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.a[i * n + j] = g[i] * self.a[j * n + i] * g[j];
            }
        }
        out
    }

    /// Max-norm of `BᵀGB − G`.
    pub fn group_residual(&self, g: &[f64]) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for m in 0..n {
                    s += self.a[m * n + i] * g[m] * self.a[m * n + j];
                }
                let target = if i == j { g[i] } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }

    /// Max-norm of `MᵀG + GM` (membership in the Lie algebra).
    pub fn g_skew_residual(&self, g: &[f64]) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.a[j * n + i] * g[j] + g[i] * self.a[i * n + j]).abs());
            }
        }
        worst
    }

    /// Re-orthonormalize rows with respect to the indefinite product
    /// `⟨x,y⟩_G = Σ g_k x_k y_k`, pinning the last row to `pinned` exactly.
    /// Rows 0..n-1 are processed in index order, each made G-orthogonal to
    /// the pinned row and all previously processed rows, then normalized to
    /// `⟨r,r⟩_G = g[i]`.
    pub fn g_gram_schmidt_rows(&mut self, g: &[f64], pinned: &[f64]) -> Result<()> {
        let n = self.n;
        let dot = |x: &[f64], y: &[f64]| -> f64 {
            x.iter().zip(y).zip(g).map(|((a, b), s)| s * a * b).sum()
        };
        let last = n - 1;
        let pn = dot(pinned, pinned);
        if (pn - g[last]).abs() > 0.5 {
            return Err(Error::RowConstraint(format!(
                "pinned row has G-norm {pn}, expected {}",
                g[last]
            )));
        }
        // normalize the pinned row exactly to its sign
        let scale = 1.0 / (pn.abs()).sqrt();
        for j in 0..n {
            self.a[last * n + j] = pinned[j] * scale;
        }
        for i in 0..last {
            let mut row: Vec<f64> = self.row(i).to_vec();
            // subtract G-projection on pinned row and on earlier rows
            for k in (0..i).chain(std::iter::once(last)) {
                let rk: Vec<f64> = self.row(k).to_vec();
                let c = dot(&row, &rk) * g[k]; // ⟨rk,rk⟩_G = g[k], 1/g[k] = g[k]
                for j in 0..n {
                    row[j] -= c * rk[j];
                }
            }
            let nn = dot(&row, &row);
            if nn.abs() < 1e-12 {
                return Err(Error::FrameCompletion(format!(
                    "row {i} degenerated during re-projection"
                )));
            }
            if nn.signum() != g[i].signum() {
                return Err(Error::FrameCompletion(format!(
                    "row {i} has G-norm sign {} but target {}",
                    nn.signum(),
                    g[i]
                )));
            }
            let inv = 1.0 / nn.abs().sqrt();
            for j in 0..n {
                self.a[i * n + j] = row[j] * inv;
            }
        }
        Ok(())
    }
}
