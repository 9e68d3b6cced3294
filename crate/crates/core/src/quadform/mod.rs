//! Half-integral symmetric matrices and their p-adic invariants.

mod dyadic;
mod invariants;
mod jordan;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::egk::EgkError;
use crate::exact::{int, parse_rational, ExactError, Rational};
use crate::localfield::{rational_is_p_integral, LocalFieldError, PrimeContext};

pub use dyadic::{
    category, check_admissible, check_reduced, egk_from_reduced, m0_element, Category, Involution,
};
pub use invariants::{d_b, diagonalize, e_b, eps_b, eta_b, xi_b, zeta_of, PivotOrder};
pub use jordan::{egk_odd, gk_odd, jordan_odd, naive_odd, JordanForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadFormError {
    #[error("row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entries ({i},{j}) and ({j},{i}) differ")]
    NotSymmetric { i: usize, j: usize },
    #[error("entry ({i},{j}) is not half-integral: {detail}")]
    NotHalfIntegral { i: usize, j: usize, detail: String },
    #[error("matrix is degenerate (determinant zero)")]
    Degenerate,
    #[error("prime {p} is not supported here: {detail}")]
    UnsupportedPrime { p: u64, detail: &'static str },
    #[error("involution is not admissible, clause ({clause}) at index {index}: {detail}")]
    Inadmissible {
        clause: &'static str,
        index: usize,
        detail: String,
    },
    #[error("not a reduced form, condition ({clause}) at ({i},{j}): {detail}")]
    NotReduced {
        clause: &'static str,
        i: usize,
        j: usize,
        detail: String,
    },
    #[error("principal block of size {0} is degenerate")]
    DegenerateBlock(usize),
    #[error("matrix is not diagonal at ({i},{j})")]
    NotDiagonal { i: usize, j: usize },
    #[error("invalid permutation: {0}")]
    BadInvolution(String),
    #[error("GK sequence is not non-decreasing at index {0}")]
    BadGk(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    LocalField(#[from] LocalFieldError),
    #[error(transparent)]
    Egk(#[from] EgkError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Symmetric matrix over `Q`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct HalfIntMat {
    n: usize,
    entries: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    entries: Vec<Vec<String>>,
}

impl TryFrom<MatrixJson> for HalfIntMat {
    type Error = QuadFormError;

    fn try_from(m: MatrixJson) -> Result<Self, Self::Error> {
        if m.entries.len() != m.n {
            return Err(QuadFormError::LengthMismatch {
                expected: m.n,
                got: m.entries.len(),
            });
        }
        let rows = m
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        HalfIntMat::new(rows)
    }
}

impl From<HalfIntMat> for MatrixJson {
    fn from(b: HalfIntMat) -> Self {
        MatrixJson {
            n: b.n,
            entries: b
                .entries
                .chunks(b.n.max(1))
                .take(b.n)
                .map(|r| r.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
    }
}

impl HalfIntMat {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self, QuadFormError> {
        let n = rows.len();
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(QuadFormError::NotSquare {
                    row: row + 1,
                    len: r.len(),
                    n,
                });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if rows[i][j] != rows[j][i] {
                    return Err(QuadFormError::NotSymmetric { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(Self {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, QuadFormError> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    pub fn diag(d: Vec<Rational>) -> Self {
        let n = d.len();
        let mut entries = vec![Rational::zero(); n * n];
        for (i, x) in d.into_iter().enumerate() {
            entries[i * n + i] = x;
        }
        Self { n, entries }
    }

    pub fn diag_i64(d: &[i64]) -> Self {
        Self::diag(d.iter().map(|&x| int(x)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    /// Upper-left `k x k` block.
    pub fn principal(&self, k: usize) -> HalfIntMat {
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                entries.push(self.get(i, j).clone());
            }
        }
        HalfIntMat { n: k, entries }
    }

    /// `B[U] = U^t B U`.
    pub fn gram_transform(&self, u: &[Vec<Rational>]) -> Result<HalfIntMat, QuadFormError> {
        let n = self.n;
        if u.len() != n || u.iter().any(|r| r.len() != n) {
            return Err(QuadFormError::LengthMismatch {
                expected: n,
                got: u.len(),
            });
        }
        let mut bu = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for k in 0..n {
                    acc += self.get(i, k) * &u[k][j];
                }
                bu[i * n + j] = acc;
            }
        }
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for k in 0..n {
                    acc += &u[k][i] * &bu[k * n + j];
                }
                entries[i * n + j] = acc;
            }
        }
        Ok(HalfIntMat { n, entries })
    }

    pub fn det(&self) -> Rational {
        det(self.rows())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    /// Entrywise sum.
    pub fn add(&self, other: &HalfIntMat) -> Result<HalfIntMat, QuadFormError> {
        if other.n != self.n {
            return Err(QuadFormError::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(HalfIntMat {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

impl std::fmt::Display for HalfIntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                format!(
                    "[{}]",
                    r.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Determinant by Gaussian elimination over `Q`.
pub fn det(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut acc = Rational::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Rational::zero();
        };
        if piv != k {
            a.swap(piv, k);
            acc = -acc;
        }
        let pivot = a[k][k].clone();
        acc *= &pivot;
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let c = &a[i][k] / &pivot;
            for j in k..n {
                let t = &c * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    acc
}

/// Half-integrality at `p` and non-degeneracy.
pub fn validate(b: &HalfIntMat, ctx: &PrimeContext) -> Result<(), QuadFormError> {
    let two = int(2);
    for i in 0..b.n {
        for j in i..b.n {
            let (x, what) = if i == j {
                (b.get(i, i).clone(), "diagonal entry")
            } else {
                (b.get(i, j) * &two, "twice the off-diagonal entry")
            };
            if !rational_is_p_integral(ctx, &x) {
                return Err(QuadFormError::NotHalfIntegral {
                    i: i + 1,
                    j: j + 1,
                    detail: format!("{what} {x} has negative valuation at {}", ctx.p()),
                });
            }
        }
    }
    if b.det().is_zero() {
        return Err(QuadFormError::Degenerate);
    }
    Ok(())
}

/// Non-decreasing exponent sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GKData(Vec<u32>);

impl GKData {
    pub fn new(a: Vec<u32>) -> Result<Self, QuadFormError> {
        if let Some(i) = (1..a.len()).find(|&i| a[i - 1] > a[i]) {
            return Err(QuadFormError::BadGk(i + 1));
        }
        Ok(Self(a))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Runs `(n_s, m_s)`.
    pub fn blocks(&self) -> Vec<(usize, u32)> {
        crate::egk::blocks(&self.0)
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use rand::Rng;

    /// Random unimodular integer matrix with small entries.
    pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<Rational>> {
        let mut u: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        for _ in 0..2 * n {
            if n < 2 {
                break;
            }
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let c = rng.gen_range(-1..=1);
            let candidate: Vec<i64> = (0..n).map(|k| u[k][j] + c * u[k][i]).collect();
            if candidate.iter().all(|x| x.abs() <= 3) {
                for k in 0..n {
                    u[k][j] = candidate[k];
                }
            }
        }
        if n >= 2 && rng.gen_bool(0.5) {
            for row in u.iter_mut() {
                row.swap(0, n - 1);
            }
        }
        if rng.gen_bool(0.5) {
            for row in u.iter_mut() {
                row[0] = -row[0];
            }
        }
        u.into_iter()
            .map(|r| r.into_iter().map(int).collect())
            .collect()
    }
}
