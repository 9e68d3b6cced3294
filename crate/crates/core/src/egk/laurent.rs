//! The Laurent polynomial `F(H; Y, X)` by recursion and by the `2^n` sum.

use num_traits::{One, Signed, Zero};

use super::{c_i, e_seq, lift_one, validate_naive, EGKDatum, EgkError, NaiveEGK};
use crate::exact::{int, rational_sqrt, BiLaurent, Rational};

pub(crate) fn base_case(a1: u32) -> BiLaurent {
    let a = i64::from(a1);
    BiLaurent::from_terms((0..=a).map(|i| ((2 * i - a, 0), int(1))))
}

/// `F(H)` through the defining recursion on the length.
pub fn f_recursive(h: &NaiveEGK) -> Result<BiLaurent, EgkError> {
    validate_naive(h)?;
    let e = e_seq(&h.a);
    let mut f = base_case(h.a[0]);
    for k in 2..=h.len() {
        let (xi, zeta) = if k % 2 == 0 {
            (h.eps_at(k), 1)
        } else {
            (h.eps_at(k - 1), h.eps_at(k))
        };
        f = recursion_step(&f, k, e[k], e[k - 1], xi, zeta)?;
    }
    Ok(f)
}

/// `C_k(X) F(YX) + zeta C_k(X^{-1}) F(YX^{-1})`.
pub(crate) fn recursion_step(
    f: &BiLaurent,
    k: usize,
    e: i64,
    ee: i64,
    xi: i8,
    zeta: i8,
) -> Result<BiLaurent, EgkError> {
    let c = c_i(k, e, ee, xi);
    let c_inv = c.map_x(0, -1);
    let left = c.mul_poly(&f.map_x(1, 1));
    let right = c_inv.mul_poly(&f.map_x(1, -1)).scale(&int(zeta.into()));
    Ok(left.add(&right).to_polynomial()?)
}

/// Splits `f = unit * g` with `g` shifted to minimal exponents zero and
/// lex-leading coefficient one.
fn normalize(f: &BiLaurent) -> (Rational, (i64, i64), BiLaurent) {
    let (dx, dy) = f.min_exponents().expect("non-zero factor");
    let g = f.shift(-dx, -dy);
    let lc = g.leading().unwrap().1.clone();
    let g = g.scale(&lc.recip());
    (lc, (dx, dy), g)
}

/// Factors a binomial `A - c B` into `(sqrt A - sqrt(c) sqrt B)(sqrt A + ...)`
/// as long as the exponents and `c` allow it.
fn split_factor(f: BiLaurent, out: &mut Vec<BiLaurent>) {
    if f.len() == 2 {
        let mut it = f.terms();
        let (&ka, ca) = it.next().unwrap();
        let (&kb, cb) = it.next().unwrap();
        let even = |k: (i64, i64)| k.0 % 2 == 0 && k.1 % 2 == 0;
        let ratio = -(cb / ca);
        if even(ka) && even(kb) && ratio.is_positive() {
            if let Some(root) = rational_sqrt(&ratio) {
                let ha = (ka.0 / 2, ka.1 / 2);
                let hb = (kb.0 / 2, kb.1 / 2);
                out.push(BiLaurent::constant(ca.clone()));
                for sign in [1, -1] {
                    let g = BiLaurent::from_terms([
                        (ha, Rational::one()),
                        (hb, root.clone() * int(sign)),
                    ]);
                    split_factor(g, out);
                }
                return;
            }
        }
    }
    out.push(f);
}

struct Term {
    num: BiLaurent,
    dens: Vec<BiLaurent>,
}

/// `F(H)` as the signed sum over `(i_1..i_n)` in `{±1}^n`.
pub fn f_closed(h: &NaiveEGK) -> Result<BiLaurent, EgkError> {
    validate_naive(h)?;
    let n = h.len();
    let e = e_seq(&h.a);
    let mut terms = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let signs: Vec<i64> = (0..n)
            .map(|j| if mask >> j & 1 == 1 { -1 } else { 1 })
            .collect();
        let mut num = BiLaurent::one();
        let mut dens = Vec::new();
        for j in 1..=n {
            let i_j = signs[j - 1];
            let xi_j = if j % 2 == 0 {
                h.eps_at(j)
            } else {
                h.eps_at(j - 1)
            };
            if i_j == -1 && j % 2 == 1 {
                num = num.scale(&int(h.eps_at(j).into()));
            }
            let mut prod = 1i64;
            let mut s = 0i64;
            for &i_l in &signs[j - 1..n - 1] {
                prod *= i_l;
                s += prod;
            }
            let t = prod * signs[n - 1];
            let c = c_i(j, e[j], e[j - 1], xi_j).map_x(s, t);
            num = &num * c.num();
            let mut parts = Vec::new();
            split_factor(c.den().clone(), &mut parts);
            for part in parts {
                let (lc, (dx, dy), g) = normalize(&part);
                num = num.scale(&lc.recip()).shift(-dx, -dy);
                if g != BiLaurent::one() {
                    dens.push(g);
                }
            }
        }
        terms.push(Term { num, dens });
    }
    // common multiple: each distinct factor with its largest multiplicity
    let mut common: Vec<(BiLaurent, usize)> = Vec::new();
    for t in &terms {
        let mut counts: Vec<(&BiLaurent, usize)> = Vec::new();
        for d in &t.dens {
            match counts.iter_mut().find(|(g, _)| *g == d) {
                Some(entry) => entry.1 += 1,
                None => counts.push((d, 1)),
            }
        }
        for (d, k) in counts {
            match common.iter_mut().find(|(g, _)| g == d) {
                Some(entry) => entry.1 = entry.1.max(k),
                None => common.push((d.clone(), k)),
            }
        }
    }
    let mut total = BiLaurent::zero();
    for t in terms {
        let mut missing: Vec<(BiLaurent, usize)> = common.clone();
        for d in &t.dens {
            let entry = missing.iter_mut().find(|(g, _)| g == d).unwrap();
            entry.1 -= 1;
        }
        let mut num = t.num;
        for (g, k) in missing {
            for _ in 0..k {
                num = &num * &g;
            }
        }
        total = &total + &num;
    }
    for (g, k) in common {
        for _ in 0..k {
            total = total.div_exact(&g)?;
        }
    }
    debug_assert!(!total.terms().any(|(_, c)| c.is_zero()));
    Ok(total)
}

/// `F~(G)`, computed from one naive lift of `G`.
pub fn f_tilde_egk(g: &EGKDatum) -> Result<BiLaurent, EgkError> {
    f_recursive(&lift_one(g)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::egk::{enumerate_egk, enumerate_naive, lift, EGKDatum, LiftMode};
    use crate::exact::{Image, Var};
    use proptest::prelude::*;

    fn x(h: i64) -> BiLaurent {
        BiLaurent::unit_monomial(h, 0)
    }

    #[test]
    fn base_cases() {
        let h = NaiveEGK::new(vec![2], vec![1]).unwrap();
        assert_eq!(f_recursive(&h).unwrap(), &(&x(-2) + &x(0)) + &x(2));
        let h = NaiveEGK::new(vec![0], vec![1]).unwrap();
        assert_eq!(f_recursive(&h).unwrap(), BiLaurent::one());
        let h = NaiveEGK::new(vec![1], vec![1]).unwrap();
        assert_eq!(f_closed(&h).unwrap(), &x(-1) + &x(1));
    }

    #[test]
    fn trivial_pair() {
        let h = NaiveEGK::new(vec![0, 0], vec![1, 1]).unwrap();
        assert_eq!(f_recursive(&h).unwrap(), BiLaurent::one());
    }

    #[test]
    fn egk_examples() {
        let g = EGKDatum::new(vec![1], vec![2], vec![1]).unwrap();
        assert_eq!(f_tilde_egk(&g).unwrap(), &(&x(-2) + &x(0)) + &x(2));
        let g = EGKDatum::new(vec![2], vec![0], vec![1]).unwrap();
        assert_eq!(f_tilde_egk(&g).unwrap(), BiLaurent::one());
        let g = EGKDatum::new(vec![1, 1], vec![0, 2], vec![1, 1]).unwrap();
        let want = &(&x(-2) - &BiLaurent::unit_monomial(0, -2)) + &x(2);
        assert_eq!(f_tilde_egk(&g).unwrap(), want);
    }

    #[test]
    fn closed_matches_recursive_exhaustively() {
        for n in 1..=4 {
            for h in enumerate_naive(n, 3) {
                assert_eq!(f_closed(&h).unwrap(), f_recursive(&h).unwrap(), "{h}");
            }
        }
    }

    #[test]
    fn closed_matches_on_listed_data() {
        let h = NaiveEGK::new(vec![0, 2], vec![1, 1]).unwrap();
        assert_eq!(f_closed(&h).unwrap(), f_recursive(&h).unwrap());
        for h in enumerate_naive(3, 2)
            .into_iter()
            .filter(|h| h.a == [1, 1, 2])
        {
            assert_eq!(f_closed(&h).unwrap(), f_recursive(&h).unwrap());
        }
    }

    #[test]
    fn functional_equation_and_integrality() {
        for n in 1..=5 {
            for h in enumerate_naive(n, 3) {
                let f = f_recursive(&h).unwrap();
                assert!(f.has_integer_coefficients());
                assert!(
                    f.terms().all(|(k, _)| k.1 % 2 == 0),
                    "Y exponents are integral"
                );
                let eta = if n % 2 == 1 { h.eps[n - 1] } else { 1 };
                let flipped = f.substitute(Var::X, &Image::Inverse).unwrap();
                assert_eq!(flipped, f.scale(&int(eta.into())), "{h}");
            }
        }
    }

    #[test]
    fn lift_independence() {
        for n in 1..=6 {
            for g in enumerate_egk(n, 2) {
                let lifts = lift(&g, LiftMode::All).unwrap();
                let first = f_recursive(&lifts[0]).unwrap();
                for h in &lifts[1..] {
                    assert_eq!(f_recursive(h).unwrap(), first, "{g} via {h}");
                }
            }
        }
    }

    fn naive_strategy() -> impl Strategy<Value = NaiveEGK> {
        (
            1usize..=6,
            proptest::collection::vec(0u32..3, 6),
            any::<u64>(),
        )
            .prop_map(|(n, steps, seed)| {
                let mut a = Vec::with_capacity(n);
                let mut acc = 0;
                for s in steps.into_iter().take(n) {
                    acc += s;
                    a.push(acc);
                }
                let all: Vec<NaiveEGK> = enumerate_naive_for(&a);
                all[(seed % all.len() as u64) as usize].clone()
            })
    }

    fn enumerate_naive_for(a: &[u32]) -> Vec<NaiveEGK> {
        let mut out = Vec::new();
        let n = a.len();
        for code in 0..3usize.pow(n as u32) {
            let mut c = code;
            let eps: Vec<i8> = (0..n)
                .map(|_| {
                    let e = [1i8, -1, 0][c % 3];
                    c /= 3;
                    e
                })
                .collect();
            if let Ok(h) = NaiveEGK::new(a.to_vec(), eps) {
                out.push(h);
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn closed_matches_recursive_random(h in naive_strategy()) {
            prop_assert_eq!(f_closed(&h).unwrap(), f_recursive(&h).unwrap());
        }
    }
}
