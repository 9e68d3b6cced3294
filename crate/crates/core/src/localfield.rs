//! Valuations, square classes and Hilbert symbols over `Q_p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{int, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalFieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("argument must be non-zero")]
    ZeroArgument,
    #[error("{0} is a square in Q_p; its character is trivial")]
    Square(String),
    #[error("precision p^{e} is below the required bound p^{required}")]
    PrecisionTooLow { e: u32, required: u32 },
    #[error("search modulus p^{0} is too large")]
    TooLarge(u32),
}

/// The prime `p` together with `e0 = ord_p(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeContext {
    p: u64,
    e0: u32,
}

impl PrimeContext {
    pub fn new(p: u64) -> Result<Self, LocalFieldError> {
        if !is_prime(p) {
            return Err(LocalFieldError::NotPrime(p));
        }
        Ok(Self {
            p,
            e0: u32::from(p == 2),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e0(&self) -> u32 {
        self.e0
    }

    pub fn is_dyadic(&self) -> bool {
        self.p == 2
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation; `Infinite` is the valuation of zero and compares
/// above every finite value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

/// Valuation of a non-zero integer.
pub(crate) fn int_val(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn ordp(ctx: &PrimeContext, a: &Rational) -> Valuation {
    if a.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(int_val(a.numer(), ctx.p) - int_val(a.denom(), ctx.p))
}

/// Splits `a = p^v * u` with `u` a p-adic unit.
pub fn unit_part(ctx: &PrimeContext, a: &Rational) -> Result<(i64, Rational), LocalFieldError> {
    let Valuation::Finite(v) = ordp(ctx, a) else {
        return Err(LocalFieldError::ZeroArgument);
    };
    let pv = num_traits::pow(ctx.p_big(), v.unsigned_abs() as usize);
    let u = if v >= 0 {
        a / Rational::from_integer(pv)
    } else {
        a * Rational::from_integer(pv)
    };
    Ok((v, u))
}

/// Residue of a p-integral rational modulo `m` (a power of `p`).
pub(crate) fn residue(a: &Rational, m: u64) -> u64 {
    let mb = BigInt::from(m);
    let n = a.numer().mod_floor(&mb);
    let d = a.denom().mod_floor(&mb);
    let dinv = mod_inverse(d.to_u64().unwrap(), m).expect("denominator prime to p");
    ((n.to_u64().unwrap() as u128 * dinv as u128) % m as u128) as u64
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = extended_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128 % m as u128;
    let mut base = b as u128 % m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u128;
        }
        base = base * base % m as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

/// Legendre symbol of a residue prime to the odd prime `p`.
fn legendre(a: u64, p: u64) -> i8 {
    if pow_mod(a % p, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Hilbert symbol `<a, b>` over `Q_p`.
pub fn hilbert(ctx: &PrimeContext, a: &Rational, b: &Rational) -> Result<i8, LocalFieldError> {
    let (alpha, u) = unit_part(ctx, a)?;
    let (beta, v) = unit_part(ctx, b)?;
    let p = ctx.p;
    if p != 2 {
        let mut s: i8 = 1;
        if (alpha * beta).is_odd() && ((p - 1) / 2).is_odd() {
            s = -s;
        }
        if beta.is_odd() {
            s *= legendre(residue(&u, p), p);
        }
        if alpha.is_odd() {
            s *= legendre(residue(&v, p), p);
        }
        Ok(s)
    } else {
        let u8_ = residue(&u, 8);
        let v8 = residue(&v, 8);
        let eps = |x: u64| ((x - 1) / 2) % 2;
        let omega = |x: u64| ((x * x - 1) / 8) % 2;
        let mut e = eps(u8_) * eps(v8);
        if alpha.is_odd() {
            e += omega(v8);
        }
        if beta.is_odd() {
            e += omega(u8_);
        }
        Ok(if e % 2 == 0 { 1 } else { -1 })
    }
}

/// Integer in the square class of `a`, with even powers of `p` removed.
fn square_class_integer(ctx: &PrimeContext, a: &Rational) -> BigInt {
    let mut n = a.numer() * a.denom();
    let p2 = ctx.p_big() * ctx.p_big();
    loop {
        let (q, r) = n.div_rem(&p2);
        if !r.is_zero() {
            return n;
        }
        n = q;
    }
}

/// Decides solvability of `z^2 = a x^2 + b y^2` by scanning primitive
/// solutions modulo `p^e`.
///
/// A primitive solution has a unit coordinate; after clearing denominators
/// the `z`-only case cannot occur, and scaling puts the unit coordinate at 1,
/// so it suffices to scan `z^2 = a + b y^2` and `z^2 = a x^2 + b` over all
/// residues. With `e >= 2 ord(4ab) + 3` a solution modulo `p^e` lifts.
pub fn hilbert_bruteforce(
    ctx: &PrimeContext,
    a: &Rational,
    b: &Rational,
    e: u32,
) -> Result<i8, LocalFieldError> {
    if a.is_zero() || b.is_zero() {
        return Err(LocalFieldError::ZeroArgument);
    }
    let a = square_class_integer(ctx, a);
    let b = square_class_integer(ctx, b);
    let prod = Rational::from_integer(&a * &b * 4);
    let ord4ab = ordp(ctx, &prod).finite().unwrap();
    let required = (2 * ord4ab + 3) as u32;
    if e < required {
        return Err(LocalFieldError::PrecisionTooLow { e, required });
    }
    let p = ctx.p;
    let m = match p.checked_pow(e) {
        Some(m) if m <= 1 << 26 => m,
        _ => return Err(LocalFieldError::TooLarge(e)),
    };
    let mb = BigInt::from(m);
    let am = a.mod_floor(&mb).to_u64().unwrap() as u128;
    let bm = b.mod_floor(&mb).to_u64().unwrap() as u128;
    let mut is_square = vec![false; m as usize];
    for z in 0..m as u128 {
        is_square[(z * z % m as u128) as usize] = true;
    }
    let m128 = m as u128;
    for t in 0..m128 {
        let t2 = t * t % m128;
        if is_square[((am + bm * t2) % m128) as usize]
            || is_square[((am * t2 + bm) % m128) as usize]
        {
            return Ok(1);
        }
    }
    Ok(-1)
}

/// Splitting type of `Q_p(sqrt d) / Q_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadExtKind {
    Split,
    Unramified,
    Ramified,
}

impl QuadExtKind {
    /// `+1`, `-1`, `0` for split, unramified, ramified.
    pub fn xi(self) -> i8 {
        match self {
            QuadExtKind::Split => 1,
            QuadExtKind::Unramified => -1,
            QuadExtKind::Ramified => 0,
        }
    }
}

pub fn quad_ext(ctx: &PrimeContext, d: &Rational) -> Result<QuadExtKind, LocalFieldError> {
    let (v, u) = unit_part(ctx, d)?;
    if v.is_odd() {
        return Ok(QuadExtKind::Ramified);
    }
    if ctx.p == 2 {
        Ok(match residue(&u, 8) {
            1 => QuadExtKind::Split,
            5 => QuadExtKind::Unramified,
            _ => QuadExtKind::Ramified,
        })
    } else if legendre(residue(&u, ctx.p), ctx.p) == 1 {
        Ok(QuadExtKind::Split)
    } else {
        Ok(QuadExtKind::Unramified)
    }
}

pub fn is_square(ctx: &PrimeContext, d: &Rational) -> Result<bool, LocalFieldError> {
    Ok(quad_ext(ctx, d)? == QuadExtKind::Split)
}

/// Valuation of the discriminant ideal of `Q_p(sqrt d) / Q_p`.
pub fn disc_valuation(ctx: &PrimeContext, d: &Rational) -> Result<i64, LocalFieldError> {
    Ok(match quad_ext(ctx, d)? {
        QuadExtKind::Split | QuadExtKind::Unramified => 0,
        QuadExtKind::Ramified if ctx.p != 2 => 1,
        QuadExtKind::Ramified => {
            let (v, _) = unit_part(ctx, d)?;
            if v.is_odd() {
                3
            } else {
                2
            }
        }
    })
}

/// Conductor exponent of `z -> <z, d>` found by sweeping Hilbert symbols:
/// the least `f` with the character trivial on `1 + p^f Z_p` (on all units
/// when `f = 0`).
pub fn conductor_check(ctx: &PrimeContext, d: &Rational) -> Result<i64, LocalFieldError> {
    if is_square(ctx, d)? {
        return Err(LocalFieldError::Square(d.to_string()));
    }
    let p = ctx.p;
    for f in 0u32..8 {
        let k = f + 3;
        let modulus = p.pow(k);
        let trivial = if f == 0 {
            (1..modulus)
                .filter(|t| t % p != 0)
                .all(|t| hilbert(ctx, &int(t as i64), d) == Ok(1))
        } else {
            let step = p.pow(f);
            (0..p.pow(k - f)).all(|t| hilbert(ctx, &int((1 + step * t) as i64), d) == Ok(1))
        };
        if trivial {
            return Ok(f as i64);
        }
    }
    unreachable!("conductor of a quadratic character exceeds p^7")
}

/// Smallest positive quadratic non-residue modulo the odd prime `p`.
pub fn non_residue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(a, p) == -1).expect("odd prime")
}

/// `{±1, ±2, ±3, ±5, ±p, ±2p}` without repeats.
pub fn hilbert_grid(p: u64) -> Vec<i64> {
    let p = p as i64;
    let mut out: Vec<i64> = Vec::new();
    for x in [1, 2, 3, 5, p, 2 * p] {
        for s in [x, -x] {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

/// Non-squares `u * p^j` with `u` in a small unit sample and `j` in `{0, 1}`.
pub fn nonsquare_samples(p: u64) -> Vec<i64> {
    let ctx = PrimeContext::new(p).expect("prime");
    let pi = p as i64;
    let mut out = Vec::new();
    for j in 0..2 {
        for u in [1i64, -1, 2, -2, 3, -3, 5, -5, 7, -7, 6, -6, 10, -10] {
            if u % pi == 0 {
                continue;
            }
            let d = u * pi.pow(j);
            if !out.contains(&d) && !is_square(&ctx, &int(d)).unwrap_or(true) {
                out.push(d);
            }
        }
    }
    out
}

/// Smallest precision `hilbert_bruteforce` accepts for `(a, b)`.
pub fn bruteforce_precision(ctx: &PrimeContext, a: &Rational, b: &Rational) -> u32 {
    let a = square_class_integer(ctx, a);
    let b = square_class_integer(ctx, b);
    let prod = Rational::from_integer(&a * &b * 4);
    2 * ordp(ctx, &prod).finite().unwrap_or(0) as u32 + 3
}

pub(crate) fn rational_is_p_integral(ctx: &PrimeContext, a: &Rational) -> bool {
    a.is_zero() || ordp(ctx, a) >= Valuation::Finite(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn ctx(p: u64) -> PrimeContext {
        PrimeContext::new(p).unwrap()
    }

    #[test]
    fn rejects_composite() {
        assert_eq!(PrimeContext::new(9), Err(LocalFieldError::NotPrime(9)));
        assert_eq!(ctx(2).e0(), 1);
        assert_eq!(ctx(7).e0(), 0);
    }

    #[test]
    fn ordp_examples() {
        assert_eq!(ordp(&ctx(3), &rat(9, 2)), Valuation::Finite(2));
        assert_eq!(ordp(&ctx(2), &rat(3, 4)), Valuation::Finite(-2));
        assert_eq!(ordp(&ctx(5), &int(0)), Valuation::Infinite);
        assert!(Valuation::Infinite > Valuation::Finite(1000));
    }

    #[test]
    fn hilbert_examples() {
        for p in [2, 3, 5, 7] {
            for b in [-6, -1, 2, 3, 10] {
                assert_eq!(hilbert(&ctx(p), &int(1), &int(b)), Ok(1));
                assert_eq!(hilbert(&ctx(p), &int(b), &int(-b)), Ok(1));
            }
        }
        assert_eq!(hilbert(&ctx(3), &int(3), &int(2)), Ok(-1));
        assert_eq!(hilbert(&ctx(2), &int(-1), &int(-1)), Ok(-1));
        assert_eq!(
            hilbert(&ctx(3), &int(0), &int(2)),
            Err(LocalFieldError::ZeroArgument)
        );
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(
            hilbert_bruteforce(&ctx(5), &int(2), &int(3), 5),
            hilbert(&ctx(5), &int(2), &int(3))
        );
        assert_eq!(hilbert_bruteforce(&ctx(3), &int(1), &int(1), 5), Ok(1));
        assert_eq!(hilbert_bruteforce(&ctx(2), &int(-1), &int(-1), 8), Ok(-1));
        assert_eq!(hilbert_bruteforce(&ctx(3), &int(3), &int(2), 5), Ok(-1));
        assert!(matches!(
            hilbert_bruteforce(&ctx(2), &int(-1), &int(-1), 3),
            Err(LocalFieldError::PrecisionTooLow { .. })
        ));
    }

    #[test]
    fn hilbert_matches_bruteforce_on_grid() {
        for p in [2u64, 3, 5, 7] {
            let c = ctx(p);
            let g = hilbert_grid(p);
            for &a in &g {
                for &b in &g {
                    let (a, b) = (int(a), int(b));
                    let e = bruteforce_precision(&c, &a, &b);
                    assert_eq!(
                        hilbert(&c, &a, &b),
                        hilbert_bruteforce(&c, &a, &b, e),
                        "{a} {b} at {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn conductor_matches_discriminant_on_samples() {
        for p in [2u64, 3, 5] {
            let c = ctx(p);
            for d in nonsquare_samples(p) {
                assert_eq!(
                    disc_valuation(&c, &int(d)),
                    conductor_check(&c, &int(d)),
                    "{d} at {p}"
                );
            }
        }
    }

    #[test]
    fn quad_ext_examples() {
        assert_eq!(quad_ext(&ctx(3), &int(4)), Ok(QuadExtKind::Split));
        assert_eq!(quad_ext(&ctx(3), &int(-4)), Ok(QuadExtKind::Unramified));
        assert_eq!(quad_ext(&ctx(3), &int(-12)), Ok(QuadExtKind::Ramified));
        assert_eq!(quad_ext(&ctx(2), &int(5)), Ok(QuadExtKind::Unramified));
        assert_eq!(quad_ext(&ctx(2), &int(-3)), Ok(QuadExtKind::Unramified));
        assert_eq!(quad_ext(&ctx(2), &rat(17, 9)), Ok(QuadExtKind::Split));
        assert_eq!(
            quad_ext(&ctx(3), &int(0)),
            Err(LocalFieldError::ZeroArgument)
        );
    }

    #[test]
    fn disc_and_conductor_examples() {
        assert_eq!(disc_valuation(&ctx(3), &int(-4)), Ok(0));
        assert_eq!(disc_valuation(&ctx(3), &int(-12)), Ok(1));
        assert_eq!(disc_valuation(&ctx(2), &int(-2)), Ok(3));
        assert_eq!(disc_valuation(&ctx(2), &int(-1)), Ok(2));
        assert_eq!(conductor_check(&ctx(3), &int(-12)), Ok(1));
        assert_eq!(conductor_check(&ctx(2), &int(5)), Ok(0));
        assert_eq!(conductor_check(&ctx(2), &int(-1)), Ok(2));
        assert_eq!(conductor_check(&ctx(2), &int(-2)), Ok(3));
        assert!(conductor_check(&ctx(3), &int(4)).is_err());
    }

    #[test]
    fn split_classes_pair_trivially() {
        for p in [2u64, 3, 5, 7] {
            let c = ctx(p);
            for d in [1i64, 4, 9, 17, -7, 2, 3, 5, -1] {
                if quad_ext(&c, &int(d)) == Ok(QuadExtKind::Split) {
                    for x in [-1i64, 2, 3, 5, 6, p as i64, 2 * p as i64] {
                        assert_eq!(hilbert(&c, &int(d), &int(x)), Ok(1));
                    }
                }
            }
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        let support = prop::sample::select(vec![-1i64, 2, 3, 5, 7, 11]);
        (
            prop::collection::vec(support, 1..4),
            prop::sample::select(vec![1i64, 3, 5, 49]),
        )
            .prop_map(|(fs, d)| rat(fs.iter().product(), d))
    }

    proptest! {
        #[test]
        fn hilbert_is_symmetric_and_bimultiplicative(
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
            a in small_rational(), b in small_rational(), c in small_rational()
        ) {
            let k = ctx(p);
            prop_assert_eq!(hilbert(&k, &a, &b), hilbert(&k, &b, &a));
            let bc = &b * &c;
            prop_assert_eq!(
                hilbert(&k, &a, &bc).unwrap(),
                hilbert(&k, &a, &b).unwrap() * hilbert(&k, &a, &c).unwrap()
            );
            prop_assert_eq!(hilbert(&k, &a, &-a.clone()), Ok(1));
        }
    }
}
