//! Explicit `F~(G)` for data of length two and three.

use super::{e_seq, validate_egk, EGKDatum, EgkError};
use crate::exact::{int, BiLaurent};

/// `X^{hx/2} Y^{hy/2}` with a signed integer coefficient.
fn mono(c: i64, hx: i64, hy: i64) -> BiLaurent {
    BiLaurent::monomial(int(c), hx, hy)
}

fn check_len(g: &EGKDatum, n: usize) -> Result<(), EgkError> {
    validate_egk(g)?;
    if g.len() != n {
        return Err(EgkError::WrongLength {
            expected: n,
            got: g.len(),
        });
    }
    Ok(())
}

/// Length-two closed form.
pub fn deg2_closed(g: &EGKDatum) -> Result<BiLaurent, EgkError> {
    check_len(g, 2)?;
    let xi = i64::from(if g.n.len() == 2 { g.zeta[1] } else { g.zeta[0] });
    let e = e_seq(&g.expanded());
    let (e1, half2) = (e[1], e[2] / 2);
    let mut f = BiLaurent::zero();
    for i in 0..=e1 {
        for j in 0..=(half2 - i) {
            f.add_term((2 * (-half2 + i + 2 * j), 2 * i), int(1));
        }
        for j in 0..=(half2 - i - 1) {
            f.add_term((2 * (-half2 + i + 1 + 2 * j), 2 * (i - 1)), int(-xi));
        }
    }
    Ok(f)
}

/// Length-three closed form.
pub fn deg3_closed(g: &EGKDatum) -> Result<BiLaurent, EgkError> {
    check_len(g, 3)?;
    let a = g.expanded();
    let parity_sign = if (a[0] + a[1]) % 2 == 0 { 1 } else { 0 };
    let (xi, eta): (i64, i64) = match g.n.as_slice() {
        [1, 1, 1] => (g.zeta[1].into(), g.zeta[2].into()),
        [1, 2] => (parity_sign, g.zeta[1].into()),
        [2, 1] => (g.zeta[0].into(), g.zeta[1].into()),
        _ => (parity_sign, 1),
    };
    let e = e_seq(&a);
    let (e1, e3) = (e[1], e[3]);
    let e2p = 2 * ((i64::from(a[0] + a[1]) + 1) / 2);
    let mut inner = BiLaurent::zero();
    for i in 0..=e1 {
        for j in 0..=(e2p / 2 - i - 1) {
            // (Y^2 X)^i (YX)^{2j}
            inner.add_term((2 * (i + 2 * j), 2 * (2 * i + 2 * j)), int(1));
            // eta X^{e3} (Y^2 X^{-1})^i (Y X^{-1})^{2j}
            inner.add_term((2 * (e3 - i - 2 * j), 2 * (2 * i + 2 * j)), int(eta));
        }
    }
    if xi != 0 {
        let xi2 = xi * xi;
        for j in 0..=(e3 - 2 * e2p + e1) {
            let sign = if j % 2 == 0 { 1 } else { xi };
            for i in 0..=e1 {
                inner.add_term((2 * (e2p - e1 + j + i), 2 * e2p), int(xi2 * sign));
            }
        }
    }
    Ok(&inner * &mono(1, -e3, 0))
}
