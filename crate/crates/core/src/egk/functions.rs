//! The rational functions `C` and `D` and their parity dispatch `C_i`.

use crate::exact::{int, BiLaurent, RatFunc};

fn xi_term(xi: i8, hx: i64, hy: i64) -> BiLaurent {
    BiLaurent::monomial(int(-i64::from(xi)), hx, hy)
}

/// `Y^{ee/2} X^{-(e-ee)/2-1} (1 - xi Y^{-1} X) / (X^{-1} - X)`.
pub fn c_func(e: i64, ee: i64, xi: i8) -> RatFunc {
    let mut factor = BiLaurent::one();
    factor = &factor + &xi_term(xi, 2, -2);
    let num = &BiLaurent::unit_monomial(-(e - ee) - 2, ee) * &factor;
    let den = BiLaurent::from_terms([((-2, 0), int(1)), ((2, 0), int(-1))]);
    RatFunc::new(num, den).expect("non-zero denominator")
}

/// `Y^{ee/2} X^{-(e-ee)/2} / (1 - xi X)`.
pub fn d_func(e: i64, ee: i64, xi: i8) -> RatFunc {
    let num = BiLaurent::unit_monomial(-(e - ee), ee);
    let den = &BiLaurent::one() + &xi_term(xi, 2, 0);
    RatFunc::new(num, den).expect("non-zero denominator")
}

/// `C` for even `i`, `D` for odd `i`.
pub fn c_i(i: usize, e: i64, ee: i64, xi: i8) -> RatFunc {
    if i % 2 == 0 {
        c_func(e, ee, xi)
    } else {
        d_func(e, ee, xi)
    }
}
