//! Two-step reductions of `F(H)` to `F(H'')` when the last two exponents agree.

use super::{e_seq, f_recursive, validate_naive, EgkError, NaiveEGK};
use crate::exact::{int, BiLaurent, RatFunc};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prop43Case {
    /// `n` odd, `a_{n-1} = a_n`, `a_1 + ... + a_{n-1}` even.
    Odd,
    /// `n` even, `a_{n-1} = a_n`, `a_1 + ... + a_n` odd.
    Even,
}

impl Prop43Case {
    pub fn of(h: &NaiveEGK) -> Option<Prop43Case> {
        let n = h.len();
        if n < 3 || h.a[n - 2] != h.a[n - 1] {
            return None;
        }
        let s_n: u64 = h.a.iter().map(|&x| u64::from(x)).sum();
        let s_prev = s_n - u64::from(h.a[n - 1]);
        match n % 2 {
            1 if s_prev % 2 == 0 => Some(Prop43Case::Odd),
            0 if s_n % 2 == 1 => Some(Prop43Case::Even),
            _ => None,
        }
    }
}

fn rf(num: BiLaurent, den: BiLaurent) -> RatFunc {
    RatFunc::new(num, den).expect("non-zero denominator")
}

/// `Z^{-1} - Z` for `Z = Y^s X^t`.
fn inv_minus(s: i64, t: i64) -> BiLaurent {
    BiLaurent::from_terms([((-2 * t, -2 * s), int(1)), ((2 * t, 2 * s), int(-1))])
}

fn inner(h: &NaiveEGK) -> Result<(BiLaurent, Vec<i64>), EgkError> {
    let n = h.len();
    Ok((f_recursive(&h.truncate(n - 2))?, e_seq(&h.a)))
}

/// Three-term expression for odd `n`.
pub fn prop43_odd(h: &NaiveEGK) -> Result<BiLaurent, EgkError> {
    validate_naive(h)?;
    if Prop43Case::of(h) != Some(Prop43Case::Odd) {
        return Err(EgkError::NotApplicable("odd-length reduction"));
    }
    let n = h.len();
    let (f2, e) = inner(h)?;
    let eps_n = int(h.eps[n - 1].into());
    let d = e[n] - e[n - 2];
    let first = rf(BiLaurent::unit_monomial(-d - 2, 0), inv_minus(1, 1)).mul_poly(&f2.map_x(2, 1));
    let second = rf(
        BiLaurent::monomial(eps_n.clone(), d + 2, 0),
        inv_minus(1, -1),
    )
    .mul_poly(&f2.map_x(2, -1));
    let bracket = first
        .add(&second)
        .mul_poly(&BiLaurent::unit_monomial(0, 2 * (e[n - 2] - 1)));
    let y_diff = BiLaurent::from_terms([
        ((0, 2 * e[n - 1] + 4), int(1)),
        ((0, 2 * e[n - 1] - 4), int(-1)),
    ]);
    let third = rf(y_diff.scale(&eps_n), &inv_minus(1, 1) * &inv_minus(1, -1)).mul_poly(&f2);
    Ok(bracket.add(&third).to_polynomial()?)
}

/// Two-term expression for even `n`.
pub fn prop43_even(h: &NaiveEGK) -> Result<BiLaurent, EgkError> {
    validate_naive(h)?;
    if Prop43Case::of(h) != Some(Prop43Case::Even) {
        return Err(EgkError::NotApplicable("even-length reduction"));
    }
    let n = h.len();
    let (f2, e) = inner(h)?;
    let d = e[n] - e[n - 2];
    let first = rf(BiLaurent::unit_monomial(-d - 2, 0), inv_minus(0, 1)).mul_poly(&f2.map_x(2, 1));
    let second =
        rf(BiLaurent::unit_monomial(d + 2, 0), inv_minus(0, -1)).mul_poly(&f2.map_x(2, -1));
    let total = first
        .add(&second)
        .mul_poly(&BiLaurent::unit_monomial(0, 2 * e[n - 2]));
    Ok(total.to_polynomial()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::egk::enumerate_naive;

    fn flip_penultimate(h: &NaiveEGK) -> Option<NaiveEGK> {
        let n = h.len();
        let mut eps = h.eps.clone();
        eps[n - 2] = -eps[n - 2];
        NaiveEGK::new(h.a.clone(), eps).ok().filter(|g| g != h)
    }

    #[test]
    fn odd_reduction_reproduces_f() {
        let mut hits = 0;
        for n in [3, 5] {
            for h in enumerate_naive(n, 3) {
                if Prop43Case::of(&h) == Some(Prop43Case::Odd) {
                    let f = f_recursive(&h).unwrap();
                    assert_eq!(prop43_odd(&h).unwrap(), f, "{h}");
                    if let Some(g) = flip_penultimate(&h) {
                        assert_eq!(f_recursive(&g).unwrap(), f);
                    }
                    hits += 1;
                }
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn even_reduction_reproduces_f() {
        let mut hits = 0;
        for n in [4, 6] {
            for h in enumerate_naive(n, 3) {
                if Prop43Case::of(&h) == Some(Prop43Case::Even) {
                    let f = f_recursive(&h).unwrap();
                    assert_eq!(prop43_even(&h).unwrap(), f, "{h}");
                    if let Some(g) = flip_penultimate(&h) {
                        assert_eq!(f_recursive(&g).unwrap(), f);
                    }
                    hits += 1;
                }
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn inapplicable_data_is_rejected() {
        let h = NaiveEGK::new(vec![0, 1, 2], vec![1, 0, 1]).unwrap();
        assert!(matches!(prop43_odd(&h), Err(EgkError::NotApplicable(_))));
        assert!(matches!(prop43_even(&h), Err(EgkError::NotApplicable(_))));
    }
}
