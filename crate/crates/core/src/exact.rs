//! Exact rationals and sparse Laurent polynomials in `X^{1/2}` and `Y^{1/2}`.
//!
//! Exponents are stored in half-units: the key `(hx, hy)` stands for the
//! monomial `X^{hx/2} Y^{hy/2}`. Everything here is exact; there is no
//! floating point anywhere in the module.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact division: remainder {remainder}")]
    NotDivisible { remainder: String },
    #[error("substitution would produce an irrational coefficient: {0}")]
    Irrational(String),
    #[error("invalid rational literal {0:?}")]
    Parse(String),
}

/// `n/d` as a rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a"` or `"a/b"` (surrounding whitespace allowed).
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let t = s.trim();
    let err = || ExactError::Parse(s.to_string());
    match t.split_once('/') {
        None => t
            .parse::<BigInt>()
            .map(Rational::from_integer)
            .map_err(|_| err()),
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| err())?;
            let b: BigInt = b.trim().parse().map_err(|_| err())?;
            if b.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(a, b))
        }
    }
}

/// Exact square root of a non-negative rational, if it exists in `Q`.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// `r^e` for any integer `e` (`r` must be non-zero when `e < 0`).
pub fn rational_pow(r: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

/// Which of the two indeterminates a substitution acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Image of a variable under [`BiLaurent::substitute`].
#[derive(Debug, Clone, PartialEq)]
pub enum Image {
    /// `V -> V^{-1}`
    Inverse,
    /// `V -> m * V` for a monomial `m`.
    Scale(BiLaurent),
    /// `V -> r` for a rational `r`.
    Value(Rational),
}

/// Sparse Laurent polynomial in `X^{1/2}`, `Y^{1/2}` with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiLaurent {
    terms: BTreeMap<(i64, i64), Rational>,
}

impl BiLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `c * X^{hx/2} * Y^{hy/2}`.
    pub fn monomial(c: Rational, hx: i64, hy: i64) -> Self {
        let mut p = Self::zero();
        p.add_term((hx, hy), c);
        p
    }

    /// `X^{hx/2} * Y^{hy/2}` with coefficient one.
    pub fn unit_monomial(hx: i64, hy: i64) -> Self {
        Self::monomial(Rational::one(), hx, hy)
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, i64), Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending `(hx, hy)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, hx: i64, hy: i64) -> Rational {
        self.terms
            .get(&(hx, hy))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Lexicographically greatest exponent pair and its coefficient.
    pub fn leading(&self) -> Option<((i64, i64), &Rational)> {
        self.terms.iter().next_back().map(|(k, c)| (*k, c))
    }

    pub fn add_term(&mut self, key: (i64, i64), c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += coef * X^{sx/2} Y^{sy/2} * other`.
    pub fn add_scaled_shifted(&mut self, other: &BiLaurent, coef: &Rational, shift: (i64, i64)) {
        for (&(hx, hy), c) in &other.terms {
            self.add_term((hx + shift.0, hy + shift.1), c * coef);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiplies by the monomial `X^{hx/2} Y^{hy/2}`.
    pub fn shift(&self, hx: i64, hy: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), v)| ((a + hx, b + hy), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Minimal `hx` and minimal `hy` over the support (taken separately).
    pub fn min_exponents(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            return None;
        }
        let mx = self.terms.keys().map(|k| k.0).min().unwrap();
        let my = self.terms.keys().map(|k| k.1).min().unwrap();
        Some((mx, my))
    }

    /// `(min hx, max hx)` over the support.
    pub fn x_range(&self) -> Option<(i64, i64)> {
        let lo = self.terms.keys().map(|k| k.0).min()?;
        let hi = self.terms.keys().map(|k| k.0).max()?;
        Some((lo, hi))
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Fast path for `X -> Y^s X^t` with `t = ±1`.
    pub fn map_x(&self, s: i64, t: i64) -> Self {
        debug_assert!(t == 1 || t == -1);
        let mut out = Self::zero();
        for (&(hx, hy), c) in &self.terms {
            out.add_term((t * hx, hy + s * hx), c.clone());
        }
        out
    }

    /// Exact substitution of one variable.
    pub fn substitute(&self, var: Var, image: &Image) -> Result<Self, ExactError> {
        // Work on (own exponent, other exponent) and swap back at the end.
        let split = |k: (i64, i64)| match var {
            Var::X => (k.0, k.1),
            Var::Y => (k.1, k.0),
        };
        let join = |own: i64, other: i64| match var {
            Var::X => (own, other),
            Var::Y => (other, own),
        };
        let mut out = Self::zero();
        match image {
            Image::Inverse => {
                for (&k, c) in &self.terms {
                    let (own, other) = split(k);
                    out.add_term(join(-own, other), c.clone());
                }
            }
            Image::Scale(m) => {
                if m.len() != 1 {
                    return Err(ExactError::Irrational(format!(
                        "scale factor {m} is not a monomial"
                    )));
                }
                let (&mk, mc) = m.terms.iter().next().unwrap();
                let (m_own, m_other) = split(mk);
                let root = rational_sqrt(mc);
                for (&k, c) in &self.terms {
                    let (own, other) = split(k);
                    // (m V)^{own/2} = m^{own/2} V^{own/2}
                    if (m_own * own) % 2 != 0 || (m_other * own) % 2 != 0 {
                        return Err(ExactError::Irrational(format!(
                            "({m})^({own}/2) leaves a quarter exponent"
                        )));
                    }
                    let coef = if own % 2 == 0 {
                        rational_pow(mc, own / 2)
                    } else {
                        match &root {
                            Some(r) => rational_pow(r, own),
                            None => {
                                return Err(ExactError::Irrational(format!("square root of {mc}")))
                            }
                        }
                    };
                    out.add_term(
                        join(own + m_own * own / 2, other + m_other * own / 2),
                        c * coef,
                    );
                }
            }
            Image::Value(r) => {
                if r.is_zero() && self.terms.keys().any(|&k| split(k).0 < 0) {
                    return Err(ExactError::DivisionByZero);
                }
                let root = rational_sqrt(r);
                for (&k, c) in &self.terms {
                    let (own, other) = split(k);
                    let coef = if own % 2 == 0 {
                        rational_pow(r, own / 2)
                    } else {
                        match &root {
                            Some(s) => rational_pow(s, own),
                            None => {
                                return Err(ExactError::Irrational(format!("square root of {r}")))
                            }
                        }
                    };
                    out.add_term(join(0, other), c * coef);
                }
            }
        }
        Ok(out)
    }

    /// Evaluates at rational `X`, `Y`.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Result<Rational, ExactError> {
        let p = self
            .substitute(Var::X, &Image::Value(x.clone()))?
            .substitute(Var::Y, &Image::Value(y.clone()))?;
        Ok(p.coeff(0, 0))
    }

    /// Exact quotient in the Laurent ring, or the remainder on failure.
    pub fn div_exact(&self, divisor: &BiLaurent) -> Result<BiLaurent, ExactError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(ExactError::NotDivisible {
                remainder: r.to_string(),
            })
        }
    }

    /// Division with remainder after clearing monomial factors; the
    /// remainder is zero iff the divisor divides `self` in the Laurent ring.
    pub fn div_rem(&self, divisor: &BiLaurent) -> Result<(BiLaurent, BiLaurent), ExactError> {
        let Some((dx, dy)) = divisor.min_exponents() else {
            return Err(ExactError::DivisionByZero);
        };
        let Some((nx, ny)) = self.min_exponents() else {
            return Ok((Self::zero(), Self::zero()));
        };
        let b = divisor.shift(-dx, -dy);
        let mut r = self.shift(-nx, -ny);
        let (lk, lc) = b.leading().map(|(k, c)| (k, c.clone())).unwrap();
        let mut q = Self::zero();
        let mut rem = Self::zero();
        while let Some((k, c)) = r.leading().map(|(k, c)| (k, c.clone())) {
            if k.0 >= lk.0 && k.1 >= lk.1 {
                let t = &c / &lc;
                let s = (k.0 - lk.0, k.1 - lk.1);
                r.add_scaled_shifted(&b, &-&t, s);
                q.add_term(s, t);
            } else {
                r.terms.remove(&k);
                rem.add_term(k, c);
            }
        }
        Ok((q.shift(nx - dx, ny - dy), rem.shift(nx, ny)))
    }
}

impl fmt::Debug for BiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiLaurent({self})")
    }
}

fn half_exponent(h: i64) -> String {
    if h % 2 == 0 {
        (h / 2).to_string()
    } else {
        format!("{h}/2")
    }
}

pub(crate) fn var_factor(name: &str, h: i64) -> Option<String> {
    match h {
        0 => None,
        2 => Some(name.to_string()),
        _ => Some(format!("{name}^{{{}}}", half_exponent(h))),
    }
}

/// Renders `c*V^{e}` style terms joined with ` + ` / ` - `. `coef` is the
/// already rendered coefficient (may carry a leading `-`).
pub(crate) fn join_terms<I: IntoIterator<Item = String>>(terms: I) -> String {
    let mut out = String::new();
    for (i, t) in terms.into_iter().enumerate() {
        if i == 0 {
            out.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn render_term(coef: &str, factors: &[String]) -> String {
    if factors.is_empty() {
        return coef.to_string();
    }
    let body = factors.join("*");
    match coef {
        "1" => body,
        "-1" => format!("-{body}"),
        c => format!("{c}*{body}"),
    }
}

impl fmt::Display for BiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().map(|(&(hx, hy), c)| {
            let factors: Vec<String> = [var_factor("X", hx), var_factor("Y", hy)]
                .into_iter()
                .flatten()
                .collect();
            render_term(&c.to_string(), &factors)
        });
        f.write_str(&join_terms(terms))
    }
}

impl Add for &BiLaurent {
    type Output = BiLaurent;
    fn add(self, rhs: &BiLaurent) -> BiLaurent {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &BiLaurent {
    type Output = BiLaurent;
    fn sub(self, rhs: &BiLaurent) -> BiLaurent {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, -c);
        }
        out
    }
}

impl Mul for &BiLaurent {
    type Output = BiLaurent;
    fn mul(self, rhs: &BiLaurent) -> BiLaurent {
        let mut out = BiLaurent::zero();
        for (&(ax, ay), ac) in &self.terms {
            out.add_scaled_shifted(rhs, ac, (ax, ay));
        }
        out
    }
}

impl Neg for &BiLaurent {
    type Output = BiLaurent;
    fn neg(self) -> BiLaurent {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($ty:ty, $tr:ident, $m:ident) => {
        impl $tr for $ty {
            type Output = $ty;
            fn $m(self, rhs: $ty) -> $ty {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(BiLaurent, Add, add);
forward_owned!(BiLaurent, Sub, sub);
forward_owned!(BiLaurent, Mul, mul);

/// Quotient of two [`BiLaurent`] values.
///
/// The denominator is kept free of monomial factors (its minimal `hx` and
/// minimal `hy` are both zero) and its lexicographically greatest term has
/// coefficient one, so associated denominators compare equal structurally.
/// Equality is tested by cross-multiplication; no GCD reduction is done.
#[derive(Clone)]
pub struct RatFunc {
    num: BiLaurent,
    den: BiLaurent,
}

impl RatFunc {
    pub fn new(num: BiLaurent, den: BiLaurent) -> Result<Self, ExactError> {
        let Some((dx, dy)) = den.min_exponents() else {
            return Err(ExactError::DivisionByZero);
        };
        let den = den.shift(-dx, -dy);
        let lc = den.leading().unwrap().1.clone();
        let inv = lc.recip();
        Ok(Self {
            num: num.shift(-dx, -dy).scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn from_poly(p: BiLaurent) -> Self {
        Self {
            num: p,
            den: BiLaurent::one(),
        }
    }

    pub fn num(&self) -> &BiLaurent {
        &self.num
    }

    pub fn den(&self) -> &BiLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn combine(&self, rhs: &RatFunc, sign: i64) -> RatFunc {
        let s = int(sign);
        if self.den == rhs.den {
            let mut num = self.num.clone();
            num.add_scaled_shifted(&rhs.num, &s, (0, 0));
            return RatFunc {
                num,
                den: self.den.clone(),
            };
        }
        let mut num = &self.num * &rhs.den;
        num.add_scaled_shifted(&(&rhs.num * &self.den), &s, (0, 0));
        RatFunc::new(num, &self.den * &rhs.den).expect("product of non-zero denominators")
    }

    pub fn add(&self, rhs: &RatFunc) -> RatFunc {
        self.combine(rhs, 1)
    }

    pub fn sub(&self, rhs: &RatFunc) -> RatFunc {
        self.combine(rhs, -1)
    }

    pub fn mul(&self, rhs: &RatFunc) -> RatFunc {
        if rhs.den == BiLaurent::one() {
            return RatFunc {
                num: &self.num * &rhs.num,
                den: self.den.clone(),
            };
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("product of non-zero denominators")
    }

    pub fn mul_poly(&self, p: &BiLaurent) -> RatFunc {
        RatFunc {
            num: &self.num * p,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// Exact Laurent-polynomial value; errors with the remainder when the
    /// denominator does not divide the numerator.
    pub fn to_polynomial(&self) -> Result<BiLaurent, ExactError> {
        self.num.div_exact(&self.den)
    }

    pub fn substitute(&self, var: Var, image: &Image) -> Result<RatFunc, ExactError> {
        let num = self.num.substitute(var, image)?;
        let den = self.den.substitute(var, image)?;
        RatFunc::new(num, den)
    }

    /// Fast path for `X -> Y^s X^t`.
    pub fn map_x(&self, s: i64, t: i64) -> RatFunc {
        RatFunc::new(self.num.map_x(s, t), self.den.map_x(s, t)).expect("monomial map keeps den")
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Result<Rational, ExactError> {
        let d = self.den.eval(x, y)?;
        if d.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(self.num.eval(x, y)? / d)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Integer power of a sign in `{-1, 0, 1}`; a zero base is rejected since
/// only the parity of the exponent is meaningful for `±1`.
pub fn sign_pow(base: i8, exp: i64) -> Option<i8> {
    match base {
        1 => Some(1),
        -1 => Some(if exp.is_even() { 1 } else { -1 }),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(h: i64) -> BiLaurent {
        BiLaurent::unit_monomial(h, 0)
    }

    #[test]
    fn half_powers_multiply_to_x() {
        assert_eq!(&x(1) * &x(1), x(2));
    }

    #[test]
    fn add_cancels_constant() {
        let p = &BiLaurent::one() + &x(2);
        let q = &p + &BiLaurent::constant(int(-1));
        assert_eq!(q, x(2));
    }

    #[test]
    fn binomial_square() {
        let p = &x(-1) + &x(1);
        let sq = &p * &p;
        let expect = BiLaurent::from_terms([((-2, 0), int(1)), ((0, 0), int(2)), ((2, 0), int(1))]);
        assert_eq!(sq, expect);
    }

    #[test]
    fn zero_terms_are_dropped() {
        let p = &x(2) - &x(2);
        assert!(p.is_zero());
        assert_eq!(p.len(), 0);
    }

    #[test]
    fn rf_div_canonical_forms() {
        let d = &x(-2) - &x(2);
        let one = RatFunc::from_poly(BiLaurent::one());
        let r = one.div(&RatFunc::from_poly(d.clone())).unwrap();
        // 1/(X^{-1}-X) = X/(1-X^2) = -X/(X^2-1)
        assert_eq!(r.den(), &(&x(4) - &BiLaurent::one()));
        assert_eq!(r.num(), &x(2).scale(&int(-1)));
        let same = RatFunc::from_poly(d.clone())
            .div(&RatFunc::from_poly(d))
            .unwrap();
        assert_eq!(same.to_polynomial().unwrap(), BiLaurent::one());
    }

    #[test]
    fn rf_div_by_zero_errors() {
        let one = RatFunc::from_poly(BiLaurent::one());
        let z = RatFunc::from_poly(BiLaurent::zero());
        assert_eq!(one.div(&z).unwrap_err(), ExactError::DivisionByZero);
        assert!(RatFunc::new(BiLaurent::one(), BiLaurent::zero()).is_err());
    }

    #[test]
    fn rf_eval_matches_reduced_form() {
        let num = &BiLaurent::one() - &x(4);
        let den = &BiLaurent::one() - &x(2);
        let r = RatFunc::new(num, den).unwrap();
        assert_eq!(r.eval(&rat(1, 2), &int(1)).unwrap(), rat(3, 2));
        assert_eq!(r.to_polynomial().unwrap(), &BiLaurent::one() + &x(2));
    }

    #[test]
    fn rf_to_polynomial_in_y() {
        let y = BiLaurent::unit_monomial(0, 2);
        let yi = BiLaurent::unit_monomial(0, -2);
        let d = &y - &yi;
        let r = RatFunc::new(d.clone(), d).unwrap();
        assert_eq!(r.to_polynomial().unwrap(), BiLaurent::one());
    }

    #[test]
    fn inexact_division_reports_remainder() {
        let num = &BiLaurent::one() + &x(4);
        let den = &BiLaurent::one() - &x(2);
        let err = RatFunc::new(num, den).unwrap().to_polynomial().unwrap_err();
        assert!(matches!(err, ExactError::NotDivisible { .. }));
    }

    #[test]
    fn substitute_examples() {
        let p = &x(-2) + &x(2);
        assert_eq!(p.substitute(Var::X, &Image::Inverse).unwrap(), p);

        let yx = BiLaurent::unit_monomial(0, 2);
        assert_eq!(
            x(2).substitute(Var::X, &Image::Scale(yx)).unwrap(),
            BiLaurent::unit_monomial(2, 2)
        );

        // hy = 2 is a whole power of Y
        let yx = BiLaurent::unit_monomial(2, 2);
        assert_eq!(
            yx.substitute(Var::Y, &Image::Value(int(3))).unwrap(),
            x(2).scale(&int(3))
        );
    }

    #[test]
    fn substitute_rejects_irrational() {
        let y = BiLaurent::unit_monomial(0, 1);
        assert!(matches!(
            y.substitute(Var::Y, &Image::Value(int(3))),
            Err(ExactError::Irrational(_))
        ));
        // Y^{1/2} at Y = 4 is 2.
        let yh = BiLaurent::unit_monomial(0, 1);
        assert_eq!(
            yh.substitute(Var::Y, &Image::Value(int(4))).unwrap(),
            BiLaurent::constant(int(2))
        );
    }

    #[test]
    fn rendering() {
        let p = &x(-1) + &x(1);
        assert_eq!(p.to_string(), "X^{-1/2} + X^{1/2}");
        let q = BiLaurent::from_terms([((0, 0), int(1)), ((2, 0), int(3))]);
        assert_eq!(q.to_string(), "1 + 3*X");
        let r = BiLaurent::from_terms([((-2, 0), int(1)), ((0, -2), int(-1)), ((2, 0), int(1))]);
        assert_eq!(r.to_string(), "X^{-1} - Y^{-1} + X");
        assert_eq!(BiLaurent::zero().to_string(), "0");
        assert_eq!(
            BiLaurent::monomial(rat(-1, 2), 4, 1).to_string(),
            "-1/2*X^{2}*Y^{1/2}"
        );
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -3 ").unwrap(), int(-3));
        assert_eq!(parse_rational("4/-6").unwrap(), rat(-2, 3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn sign_pow_parity() {
        assert_eq!(sign_pow(-1, 3), Some(-1));
        assert_eq!(sign_pow(-1, 4), Some(1));
        assert_eq!(sign_pow(1, 7), Some(1));
        assert_eq!(sign_pow(0, 2), None);
    }
}
