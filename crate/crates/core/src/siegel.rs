//! `F~(B, X)` from the EGK datum of `B`, the normalizing factor `gamma_q`,
//! and the conversion back to the integral polynomial `F(B, X)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::egk::{base_case, e_seq, f_tilde_egk, recursion_step, EGKDatum, EgkError};
use crate::exact::{
    int, join_terms, rational_pow, render_term, var_factor, BiLaurent, ExactError, Image, Rational,
    Var,
};
use crate::localfield::{ordp, LocalFieldError, PrimeContext, Valuation};
use crate::quadform::{
    e_b, egk_from_reduced, egk_odd, eta_b, validate, xi_b, GKData, HalfIntMat, Involution,
    QuadFormError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SiegelError {
    #[error("p = 2 needs a reduced-form certificate (GK sequence and involution)")]
    MissingCertificate,
    #[error("gamma_q has a pole at X = {0}")]
    Pole(String),
    #[error("half-integral power survives the conversion to F: {0}")]
    HalfPower(String),
    #[error("F has a non-integral coefficient: {0}")]
    NonIntegral(String),
    #[error("input is not a sorted diagonal Jordan form: {0}")]
    NotJordanForm(String),
    #[error("functional equation fails with sign {0}")]
    FunctionalEquation(i8),
    #[error("q must be at least 2, got {0}")]
    BadQ(u64),
    #[error(transparent)]
    QuadForm(#[from] QuadFormError),
    #[error(transparent)]
    Egk(#[from] EgkError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    LocalField(#[from] LocalFieldError),
}

/// GK sequence and involution certifying a dyadic reduced form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicCert {
    pub a: GKData,
    pub sigma: Involution,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiegelResult {
    /// `F~` with `Y` standing for `q^{1/2}`.
    pub f_tilde: BiLaurent,
    /// Coefficients of `F`, lowest degree first.
    pub f_poly: Vec<BigInt>,
    pub e_b: i64,
    pub n: usize,
    pub q: u64,
}

impl SiegelResult {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .f_tilde
            .terms()
            .map(|(&(hx, hy), c)| json!([hx, hy, c.to_string()]))
            .collect();
        json!({
            "e_b": self.e_b,
            "f_tilde": terms,
            "f": self.f_poly.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    /// `F~` with `Y` replaced by `sqrt(q)`.
    pub fn render_f_tilde(&self) -> String {
        render_at_sqrt_q(&self.f_tilde, self.q)
    }

    pub fn render_f(&self) -> String {
        render_poly(&self.f_poly)
    }
}

/// `sum c_i X^i`, ascending.
pub fn render_poly(coeffs: &[BigInt]) -> String {
    join_terms(
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let factors: Vec<String> = var_factor("X", 2 * i as i64).into_iter().collect();
                render_term(&c.to_string(), &factors)
            }),
    )
}

/// Renders a Laurent polynomial at `Y = sqrt(q)`, so each coefficient has
/// the shape `a + b*sqrt(q)` with rational `a`, `b`. Falls back to the `Y`
/// notation when a quarter power of `q` occurs.
pub fn render_at_sqrt_q(f: &BiLaurent, q: u64) -> String {
    if f.terms().any(|(&(_, hy), _)| hy % 2 != 0) {
        return f.to_string();
    }
    let qr = int(q as i64);
    let mut by_x: BTreeMap<i64, (Rational, Rational)> = BTreeMap::new();
    for (&(hx, hy), c) in f.terms() {
        let entry = by_x
            .entry(hx)
            .or_insert_with(|| (Rational::zero(), Rational::zero()));
        // Y^{hy/2} = q^{hy/4}
        let rem = hy.rem_euclid(4);
        let whole = c * rational_pow(&qr, (hy - rem) / 4);
        if rem == 0 {
            entry.0 += whole;
        } else {
            entry.1 += whole;
        }
    }
    let sq = format!("sqrt({q})");
    let terms = by_x.into_iter().filter_map(|(hx, (a, b))| {
        let coef = match (a.is_zero(), b.is_zero()) {
            (true, true) => return None,
            (false, true) => a.to_string(),
            (true, false) => render_term(&b.to_string(), std::slice::from_ref(&sq)),
            (false, false) => {
                let inner = join_terms([
                    a.to_string(),
                    render_term(&b.to_string(), std::slice::from_ref(&sq)),
                ]);
                format!("({inner})")
            }
        };
        let factors: Vec<String> = var_factor("X", hx).into_iter().collect();
        Some(render_term(&coef, &factors))
    });
    join_terms(terms)
}

/// `gamma_q(B, X)` at a rational point.
pub fn gamma_q(n: usize, q: u64, xi: i8, at: &Rational) -> Result<Rational, SiegelError> {
    let qr = int(q as i64);
    let mut acc = Rational::one() - at;
    for i in 1..=(n / 2) {
        acc *= Rational::one() - rational_pow(&qr, 2 * i as i64) * at * at;
    }
    if n % 2 == 0 && xi != 0 {
        let den = Rational::one() - rational_pow(&qr, (n / 2) as i64) * int(xi.into()) * at;
        if den.is_zero() {
            return Err(SiegelError::Pole(at.to_string()));
        }
        acc /= den;
    }
    Ok(acc)
}

/// EGK datum of `B`: the Jordan splitting for odd `p`, the certificate for
/// `p = 2`.
pub fn egk_of_matrix(
    b: &HalfIntMat,
    ctx: &PrimeContext,
    cert: Option<&DyadicCert>,
) -> Result<EGKDatum, SiegelError> {
    if ctx.is_dyadic() {
        let c = cert.ok_or(SiegelError::MissingCertificate)?;
        Ok(egk_from_reduced(b, &c.a, &c.sigma, ctx)?)
    } else {
        Ok(egk_odd(b, ctx)?)
    }
}

/// `F(B, T) = (Y^{n+1} T)^{e/2} F~(Y^{n+1} T)` with `Y^2 = q`.
pub fn f_poly_from_tilde(
    f_tilde: &BiLaurent,
    n: usize,
    e: i64,
    q: u64,
) -> Result<Vec<BigInt>, SiegelError> {
    if q < 2 {
        return Err(SiegelError::BadQ(q));
    }
    let qr = int(q as i64);
    let n1 = n as i64 + 1;
    let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
    for (&(hx, hy), c) in f_tilde.terms() {
        let t2 = hx + e;
        if t2 % 2 != 0 || t2 < 0 {
            return Err(SiegelError::HalfPower(format!(
                "T^{{{t2}/2}} from X^{{{hx}/2}}"
            )));
        }
        let y = hy + n1 * t2;
        if y % 4 != 0 {
            return Err(SiegelError::HalfPower(format!(
                "q^{{{y}/4}} from Y^{{{hy}/2}}"
            )));
        }
        *coeffs.entry(t2 / 2).or_insert_with(Rational::zero) += c * rational_pow(&qr, y / 4);
    }
    coeffs.retain(|_, c| !c.is_zero());
    let top = coeffs.keys().next_back().copied().unwrap_or(0);
    let mut out = vec![BigInt::zero(); top as usize + 1];
    for (k, c) in coeffs {
        if !c.is_integer() {
            return Err(SiegelError::NonIntegral(format!("{c} at degree {k}")));
        }
        out[k as usize] = c.to_integer();
    }
    Ok(out)
}

/// `F~(B)` through the EGK datum, plus the integral `F(B)`.
pub fn f_tilde_matrix(
    b: &HalfIntMat,
    ctx: &PrimeContext,
    cert: Option<&DyadicCert>,
) -> Result<SiegelResult, SiegelError> {
    validate(b, ctx)?;
    let g = egk_of_matrix(b, ctx, cert)?;
    let f_tilde = f_tilde_egk(&g)?;
    let e = e_b(b, ctx)?;
    let q = ctx.p();
    let f_poly = f_poly_from_tilde(&f_tilde, b.n(), e, q)?;
    Ok(SiegelResult {
        f_tilde,
        f_poly,
        e_b: e,
        n: b.n(),
        q,
    })
}

/// `F~` and `F` attached to an EGK datum at residue field size `q`.
pub fn siegel_from_egk(g: &EGKDatum, q: u64) -> Result<SiegelResult, SiegelError> {
    let f_tilde = f_tilde_egk(g)?;
    let e = *e_seq(&g.expanded()).last().unwrap();
    let f_poly = f_poly_from_tilde(&f_tilde, g.len(), e, q)?;
    Ok(SiegelResult {
        f_tilde,
        f_poly,
        e_b: e,
        n: g.len(),
        q,
    })
}

/// Peels off the last diagonal entry, taking the signs from the principal
/// blocks of `B` itself. `B` must be a sorted diagonal Jordan form.
pub fn f_tilde_recursion_odd(b: &HalfIntMat, ctx: &PrimeContext) -> Result<BiLaurent, SiegelError> {
    if ctx.is_dyadic() {
        return Err(QuadFormError::UnsupportedPrime {
            p: 2,
            detail: "the diagonal recursion needs odd p",
        }
        .into());
    }
    validate(b, ctx)?;
    if !b.is_diagonal() {
        return Err(SiegelError::NotJordanForm("off-diagonal entries".into()));
    }
    let a: Vec<u32> = b
        .diagonal()
        .iter()
        .map(|x| match ordp(ctx, x) {
            Valuation::Finite(v) => v as u32,
            Valuation::Infinite => unreachable!("validated non-degenerate"),
        })
        .collect();
    if a.windows(2).any(|w| w[0] > w[1]) {
        return Err(SiegelError::NotJordanForm(
            "exponents are not sorted".into(),
        ));
    }
    let e = e_seq(&a);
    let mut f = base_case(a[0]);
    for k in 2..=a.len() {
        let (xi, zeta) = if k % 2 == 1 {
            (
                xi_b(&b.principal(k - 1), ctx)?,
                eta_b(&b.principal(k), ctx)?,
            )
        } else {
            (xi_b(&b.principal(k), ctx)?, 1)
        };
        f = recursion_step(&f, k, e[k], e[k - 1], xi, zeta)?;
    }
    Ok(f)
}

/// `eta_B` for odd `n` and `1` for even `n`, after checking
/// `F~(B, X^{-1}) = sign * F~(B, X)`.
pub fn functional_equation_sign(
    b: &HalfIntMat,
    ctx: &PrimeContext,
    cert: Option<&DyadicCert>,
) -> Result<i8, SiegelError> {
    let r = f_tilde_matrix(b, ctx, cert)?;
    let sign = if b.n() % 2 == 1 { eta_b(b, ctx)? } else { 1 };
    let flipped = r.f_tilde.substitute(Var::X, &Image::Inverse)?;
    if flipped != r.f_tilde.scale(&int(sign.into())) {
        return Err(SiegelError::FunctionalEquation(sign));
    }
    Ok(sign)
}

/// Evaluates `F` at a rational point.
pub fn eval_poly(coeffs: &[BigInt], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| {
        acc * x + Rational::from_integer(c.clone())
    })
}

/// Smallest and largest `X` exponents (in half-units) of `F~`.
pub fn support(f: &BiLaurent) -> Option<(i64, i64)> {
    f.x_range()
}
