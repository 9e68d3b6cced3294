//! Diagonal Jordan decomposition for odd `p` and the data read off it.

use num_traits::{One, Zero};

use super::invariants::add_multiple;
use super::{validate, zeta_of, GKData, HalfIntMat, QuadFormError};
use crate::egk::{blocks, validate_naive, EGKDatum, NaiveEGK};
use crate::exact::{int, rational_pow, Rational};
use crate::localfield::{ordp, unit_part, PrimeContext, Valuation};

/// `p^{a_1} u_1 ⊥ ... ⊥ p^{a_n} u_n` with `a` non-decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanForm {
    pub pairs: Vec<(u32, Rational)>,
}

impl JordanForm {
    pub fn exponents(&self) -> Vec<u32> {
        self.pairs.iter().map(|(a, _)| *a).collect()
    }

    pub fn to_matrix(&self, ctx: &PrimeContext) -> HalfIntMat {
        HalfIntMat::diag(
            self.pairs
                .iter()
                .map(|(a, u)| rational_pow(&int(ctx.p() as i64), i64::from(*a)) * u)
                .collect(),
        )
    }
}

fn require_odd(ctx: &PrimeContext) -> Result<(), QuadFormError> {
    if ctx.is_dyadic() {
        return Err(QuadFormError::UnsupportedPrime {
            p: 2,
            detail: "Jordan splitting is only implemented for odd p",
        });
    }
    Ok(())
}

fn swap(a: &mut [Vec<Rational>], u: &mut [Vec<Rational>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
    for row in u.iter_mut() {
        row.swap(i, j);
    }
}

/// Column operation on `U` matching `add_multiple` on the Gram matrix.
fn add_column(u: &mut [Vec<Rational>], t: usize, s: usize, c: &Rational) {
    for row in u.iter_mut() {
        let v = c * &row[s];
        row[t] += v;
    }
}

/// Jordan form of `B` and a `U` with `B[U]` equal to it.
pub fn jordan_odd(
    b: &HalfIntMat,
    ctx: &PrimeContext,
) -> Result<(JordanForm, Vec<Vec<Rational>>), QuadFormError> {
    require_odd(ctx)?;
    validate(b, ctx)?;
    let n = b.n();
    let mut a = b.rows();
    let mut u: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        // minimal valuation, diagonal first on ties
        let mut best: Option<(Valuation, usize, usize)> = None;
        for i in k..n {
            for j in i..n {
                let v = ordp(ctx, &a[i][j]);
                let better = match best {
                    None => true,
                    Some((bv, bi, bj)) => v < bv || (v == bv && i == j && bi != bj),
                };
                if better && v != Valuation::Infinite {
                    best = Some((v, i, j));
                }
            }
        }
        let (_, i, j) = best.ok_or(QuadFormError::Degenerate)?;
        if i != j {
            add_multiple(&mut a, i, j, &Rational::one());
            add_column(&mut u, i, j, &Rational::one());
        }
        swap(&mut a, &mut u, k, i);
        let pivot = a[k][k].clone();
        for t in k + 1..n {
            if !a[t][k].is_zero() {
                let c = -(&a[t][k] / &pivot);
                add_multiple(&mut a, t, k, &c);
                add_column(&mut u, t, k, &c);
            }
        }
    }
    let mut pairs = Vec::with_capacity(n);
    for (i, row) in a.iter().enumerate() {
        let (v, unit) = unit_part(ctx, &row[i])?;
        pairs.push((v as u32, unit, i));
    }
    pairs.sort_by_key(|(v, _, _)| *v);
    let order: Vec<usize> = pairs.iter().map(|t| t.2).collect();
    let u = u
        .iter()
        .map(|row| order.iter().map(|&c| row[c].clone()).collect())
        .collect();
    Ok((
        JordanForm {
            pairs: pairs.into_iter().map(|(v, w, _)| (v, w)).collect(),
        },
        u,
    ))
}

pub fn gk_odd(b: &HalfIntMat, ctx: &PrimeContext) -> Result<GKData, QuadFormError> {
    let (j, _) = jordan_odd(b, ctx)?;
    GKData::new(j.exponents())
}

/// EGK datum from the sorted Jordan form.
pub fn egk_odd(b: &HalfIntMat, ctx: &PrimeContext) -> Result<EGKDatum, QuadFormError> {
    let (j, _) = jordan_odd(b, ctx)?;
    let c = j.to_matrix(ctx);
    let bl = blocks(&j.exponents());
    let mut zeta = Vec::with_capacity(bl.len());
    let mut end = 0;
    for &(k, _) in &bl {
        end += k;
        zeta.push(zeta_of(&c.principal(end), ctx)?);
    }
    Ok(EGKDatum::new(
        bl.iter().map(|t| t.0).collect(),
        bl.iter().map(|t| t.1).collect(),
        zeta,
    )?)
}

/// Naive datum with `eps_i = xi` or `eta` of the `i`-th principal block of
/// the Jordan form, for even or odd `i`.
pub fn naive_odd(b: &HalfIntMat, ctx: &PrimeContext) -> Result<NaiveEGK, QuadFormError> {
    let (j, _) = jordan_odd(b, ctx)?;
    let c = j.to_matrix(ctx);
    let eps = (1..=c.n())
        .map(|i| zeta_of(&c.principal(i), ctx))
        .collect::<Result<Vec<_>, _>>()?;
    let h = NaiveEGK {
        a: j.exponents(),
        eps,
    };
    validate_naive(&h)?;
    Ok(h)
}
