//! `D_B`, `xi_B`, `e_B`, `eps_B`, `eta_B`.

use num_traits::{One, Zero};

use super::{HalfIntMat, QuadFormError};
use crate::exact::{int, rational_pow, Rational};
use crate::localfield::{disc_valuation, hilbert, ordp, quad_ext, PrimeContext};

fn nonzero_det(b: &HalfIntMat) -> Result<Rational, QuadFormError> {
    let d = b.det();
    if d.is_zero() {
        return Err(QuadFormError::Degenerate);
    }
    Ok(d)
}

/// `(-4)^{[n/2]} det B`.
pub fn d_b(b: &HalfIntMat, _ctx: &PrimeContext) -> Result<Rational, QuadFormError> {
    let d = nonzero_det(b)?;
    Ok(rational_pow(&int(-4), (b.n() / 2) as i64) * d)
}

pub fn xi_b(b: &HalfIntMat, ctx: &PrimeContext) -> Result<i8, QuadFormError> {
    if b.n() == 0 {
        return Ok(1);
    }
    Ok(quad_ext(ctx, &d_b(b, ctx)?)?.xi())
}

pub fn e_b(b: &HalfIntMat, ctx: &PrimeContext) -> Result<i64, QuadFormError> {
    if b.n() == 0 {
        return Ok(0);
    }
    let d = d_b(b, ctx)?;
    let v = ordp(ctx, &d).finite().expect("non-zero");
    if b.n() % 2 == 0 {
        Ok(v - disc_valuation(ctx, &d)?)
    } else {
        Ok(v)
    }
}

/// Which admissible pivot to take first during diagonalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotOrder {
    First,
    Last,
}

/// Diagonal entries of a rational congruence diagonalization of `B`.
pub fn diagonalize(b: &HalfIntMat, order: PivotOrder) -> Result<Vec<Rational>, QuadFormError> {
    let mut a = b.rows();
    let mut active: Vec<usize> = (0..b.n()).collect();
    let mut out = Vec::with_capacity(b.n());
    while !active.is_empty() {
        let pick = |a: &Vec<Vec<Rational>>| {
            let mut it = active.iter().copied().filter(|&i| !a[i][i].is_zero());
            match order {
                PivotOrder::First => it.next(),
                PivotOrder::Last => it.next_back(),
            }
        };
        let k = match pick(&a) {
            Some(k) => k,
            None => {
                // all remaining diagonal entries vanish: e_i -> e_i + e_j
                let (i, j) = active
                    .iter()
                    .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                    .find(|&(i, j)| i != j && !a[i][j].is_zero())
                    .ok_or(QuadFormError::Degenerate)?;
                add_multiple(&mut a, i, j, &Rational::one());
                i
            }
        };
        let pivot = a[k][k].clone();
        for &j in &active {
            if j != k && !a[j][k].is_zero() {
                let c = -(&a[j][k] / &pivot);
                add_multiple(&mut a, j, k, &c);
            }
        }
        active.retain(|&i| i != k);
        out.push(pivot);
    }
    Ok(out)
}

/// Basis change `e_t -> e_t + c e_s` applied to the Gram matrix.
pub(crate) fn add_multiple(a: &mut [Vec<Rational>], t: usize, s: usize, c: &Rational) {
    let n = a.len();
    for k in 0..n {
        let v = c * &a[s][k];
        a[t][k] += v;
    }
    for k in 0..n {
        let v = c * &a[k][s];
        a[k][t] += v;
    }
}

fn eps_of(diag: &[Rational], ctx: &PrimeContext) -> Result<i8, QuadFormError> {
    let mut acc = 1i8;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            acc *= hilbert(ctx, &diag[i], &diag[j])?;
        }
    }
    Ok(acc)
}

pub fn eps_b(b: &HalfIntMat, ctx: &PrimeContext) -> Result<i8, QuadFormError> {
    nonzero_det(b)?;
    eps_of(&diagonalize(b, PivotOrder::First)?, ctx)
}

pub fn eta_b(b: &HalfIntMat, ctx: &PrimeContext) -> Result<i8, QuadFormError> {
    let n = b.n();
    if n == 0 {
        return Ok(1);
    }
    let det = nonzero_det(b)?;
    let eps = eps_b(b, ctx)?;
    let m = (n / 2) as i64;
    let hm1 = hilbert(ctx, &int(-1), &int(-1))?;
    let (tri, sign_exp) = if n % 2 == 1 {
        (m * (m + 1) / 2, m)
    } else {
        (m * (m - 1) / 2, m + 1)
    };
    let first = if tri % 2 == 0 { 1 } else { hm1 };
    let unit = if sign_exp % 2 == 0 { int(1) } else { int(-1) };
    Ok(first * hilbert(ctx, &unit, &det)? * eps)
}

/// `xi` for even size, `eta` for odd size.
pub fn zeta_of(b: &HalfIntMat, ctx: &PrimeContext) -> Result<i8, QuadFormError> {
    if b.n() % 2 == 0 {
        xi_b(b, ctx)
    } else {
        eta_b(b, ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::quadform::testutil::random_unimodular;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    fn hyperbolic() -> HalfIntMat {
        HalfIntMat::new(vec![vec![int(0), rat(1, 2)], vec![rat(1, 2), int(0)]]).unwrap()
    }

    #[test]
    fn d_b_examples() {
        let c = ctx(3);
        assert_eq!(d_b(&HalfIntMat::diag_i64(&[1, 1]), &c).unwrap(), int(-4));
        assert_eq!(d_b(&HalfIntMat::diag_i64(&[7]), &c).unwrap(), int(7));
        assert_eq!(d_b(&hyperbolic(), &c).unwrap(), int(1));
    }

    #[test]
    fn xi_and_e_examples() {
        let c = ctx(3);
        let b = HalfIntMat::diag_i64(&[1, 1]);
        assert_eq!((xi_b(&b, &c).unwrap(), e_b(&b, &c).unwrap()), (-1, 0));
        assert_eq!(e_b(&HalfIntMat::diag_i64(&[3]), &c).unwrap(), 1);
        let b = HalfIntMat::diag_i64(&[1, 9]);
        assert_eq!((xi_b(&b, &c).unwrap(), e_b(&b, &c).unwrap()), (-1, 2));
        let b = HalfIntMat::diag_i64(&[1, 3]);
        assert_eq!((xi_b(&b, &c).unwrap(), e_b(&b, &c).unwrap()), (0, 0));
    }

    #[test]
    fn empty_matrix_conventions() {
        let c = ctx(5);
        let b = HalfIntMat::diag(vec![]);
        assert_eq!(xi_b(&b, &c).unwrap(), 1);
        assert_eq!(e_b(&b, &c).unwrap(), 0);
        assert_eq!(eta_b(&b, &c).unwrap(), 1);
    }

    #[test]
    fn eps_eta_examples() {
        for p in [2, 3, 5, 7] {
            let c = ctx(p);
            for u in [1, 2, 3, 5, 6, 7] {
                let b = HalfIntMat::diag_i64(&[u]);
                assert_eq!(eps_b(&b, &c).unwrap(), 1);
                assert_eq!(eta_b(&b, &c).unwrap(), 1);
            }
        }
        assert_eq!(eps_b(&HalfIntMat::diag_i64(&[1, 1]), &ctx(3)).unwrap(), 1);
        // diag(1,-1) at 2: <1, det> = 1 and eps = <1,-1> = 1
        let e = eta_b(&HalfIntMat::diag_i64(&[1, -1]), &ctx(2)).unwrap();
        assert_eq!(e, 1);
        // diag(-1,-1) at 2: eps = <-1,-1> = -1
        assert_eq!(
            eta_b(&HalfIntMat::diag_i64(&[-1, -1]), &ctx(2)).unwrap(),
            -1
        );
    }

    #[test]
    fn diagonalization_handles_zero_diagonal() {
        let d = diagonalize(&hyperbolic(), PivotOrder::First).unwrap();
        assert_eq!(d.iter().product::<Rational>(), rat(-1, 4));
    }

    #[test]
    fn e_b_is_partial_sum_rule() {
        // e_B equals e_n of the exponent sequence for odd p
        let c = ctx(3);
        let cases: [(&[i64], i64); 4] = [(&[1, 3], 0), (&[1, 9], 2), (&[3, 3], 2), (&[1, 3, 9], 3)];
        for (d, want) in cases {
            assert_eq!(e_b(&HalfIntMat::diag_i64(d), &c).unwrap(), want, "{d:?}");
        }
    }

    proptest! {
        #[test]
        fn invariants_do_not_depend_on_the_basis(
            entries in proptest::collection::vec(-6i64..=6, 6),
            seed in any::<u64>(),
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
        ) {
            let b = HalfIntMat::from_i64(&[
                &[entries[0], entries[1], entries[2]],
                &[entries[1], entries[3], entries[4]],
                &[entries[2], entries[4], entries[5]],
            ]).unwrap();
            prop_assume!(!b.det().is_zero());
            let c = ctx(p);
            let d1 = diagonalize(&b, PivotOrder::First).unwrap();
            let d2 = diagonalize(&b, PivotOrder::Last).unwrap();
            prop_assert_eq!(eps_of(&d1, &c).unwrap(), eps_of(&d2, &c).unwrap());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = random_unimodular(&mut rng, 3);
            let bu = b.gram_transform(&u).unwrap();
            prop_assert_eq!(eta_b(&b, &c).unwrap(), eta_b(&bu, &c).unwrap());
            prop_assert_eq!(xi_b(&b, &c).unwrap(), xi_b(&bu, &c).unwrap());
            prop_assert_eq!(e_b(&b, &c).unwrap(), e_b(&bu, &c).unwrap());
        }
    }
}
