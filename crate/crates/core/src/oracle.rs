//! Brute-force local densities `alpha_p(H_k, B)` and the interpolated
//! polynomial `F(B, X)` they determine.
//!
//! Three counting strategies are available and cross-checked in tests:
//! direct enumeration of all `X`, iterated convolution of the per-plane
//! distribution of Gram states, and a character sum in which each
//! hyperbolic plane contributes `p^{2en - r(Y)}` for a symmetric `Y`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::{int, rational_pow, Rational};
use crate::localfield::{mod_inverse, ordp, residue, LocalFieldError, PrimeContext, Valuation};
use crate::quadform::{e_b, validate, xi_b, HalfIntMat, QuadFormError};
use crate::siegel::{f_tilde_matrix, gamma_q, DyadicCert, SiegelError};

pub const ENV_MAX_STATES: &str = "SIEGELKIT_MAX_STATES";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("invalid count job: {0}")]
    InvalidJob(String),
    #[error("density did not stabilize for k = {k}: {lo} at e = {e}, {hi} at e = {}", e + 1)]
    Unstable {
        k: usize,
        e: u32,
        lo: String,
        hi: String,
    },
    #[error("interpolated F has a non-integral coefficient {0}")]
    NonIntegral(String),
    #[error("character sum gave a non-integral count {0}")]
    BadCharacterSum(String),
    #[error(transparent)]
    QuadForm(#[from] QuadFormError),
    #[error(transparent)]
    Siegel(#[from] SiegelError),
    #[error(transparent)]
    LocalField(#[from] LocalFieldError),
}

/// Size caps for the counting strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Candidate matrices for direct enumeration.
    pub direct: u128,
    /// Gram states `p^{e n(n+1)/2}` for convolution.
    pub states: u128,
    /// Per-plane tuples `p^{2en}` for convolution.
    pub tuples: u128,
    /// `states * tuples` for one convolution step.
    pub work: u128,
    /// Symmetric matrices swept by the character sum.
    pub char_sum: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            direct: 100_000_000,
            states: 1 << 22,
            tuples: 1 << 26,
            work: 1 << 34,
            char_sum: 1 << 29,
        }
    }
}

impl Limits {
    /// Every enumeration capped at `n`, with `n^2` convolution work.
    pub fn uniform(n: u128) -> Self {
        Self {
            direct: n,
            states: n,
            tuples: n,
            work: n.saturating_mul(n),
            char_sum: n,
        }
    }

    /// Defaults, or `uniform(n)` when `SIEGELKIT_MAX_STATES=n` is set.
    pub fn from_env() -> Self {
        std::env::var(ENV_MAX_STATES)
            .ok()
            .and_then(|s| s.trim().parse::<u128>().ok())
            .map_or_else(Self::default, Self::uniform)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Direct,
    Convolution,
    CharacterSum,
}

/// Count `#{X in M_{2k,n}(Z/p^e) : H_k[X] = B mod p^e}` in the half-integral
/// sense: diagonal entries and doubled off-diagonal entries agree mod `p^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountJob {
    pub k: usize,
    pub b: HalfIntMat,
    pub p: u64,
    pub e: u32,
}

fn checked_pow(base: u64, exp: u64) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
    }
    Some(acc)
}

/// Precomputed modular data of a job.
struct Setup {
    n: usize,
    k: usize,
    p: u64,
    e: u32,
    q: u64,
    /// target coordinates in upper-triangular row-major order
    target: Vec<u64>,
}

impl CountJob {
    pub fn new(k: usize, b: HalfIntMat, p: u64, e: u32) -> Self {
        Self { k, b, p, e }
    }

    fn setup(&self) -> Result<Setup, OracleError> {
        let ctx = PrimeContext::new(self.p)?;
        if self.e == 0 {
            return Err(OracleError::InvalidJob(
                "precision e must be at least 1".into(),
            ));
        }
        let n = self.b.n();
        if n == 0 {
            return Err(OracleError::InvalidJob("empty matrix".into()));
        }
        if self.k == 0 {
            return Err(OracleError::InvalidJob("k must be at least 1".into()));
        }
        validate(&self.b, &ctx)?;
        let q = checked_pow(self.p, self.e as u64)
            .filter(|&q| q < 1 << 31)
            .ok_or_else(|| OracleError::ResourceLimit(format!("modulus {}^{}", self.p, self.e)))?
            as u64;
        let two = int(2);
        let mut target = Vec::new();
        for i in 0..n {
            for j in i..n {
                let x = if i == j {
                    self.b.get(i, i).clone()
                } else {
                    self.b.get(i, j) * &two
                };
                target.push(residue(&x, q));
            }
        }
        Ok(Setup {
            n,
            k: self.k,
            p: self.p,
            e: self.e,
            q,
            target,
        })
    }

    fn coords(&self) -> u64 {
        let n = self.b.n() as u64;
        n * (n + 1) / 2
    }

    fn size(&self, exp: u64) -> Option<u128> {
        checked_pow(self.p, exp.checked_mul(self.e as u64)?)
    }

    /// Whether `strategy` is within `limits` for this job.
    pub fn feasible(&self, strategy: Strategy, limits: &Limits) -> bool {
        let n = self.b.n() as u64;
        let within = |x: Option<u128>, cap: u128| x.is_some_and(|x| x <= cap);
        match strategy {
            Strategy::Direct => within(self.size(2 * self.k as u64 * n), limits.direct),
            Strategy::Convolution => {
                let s = self.size(self.coords());
                let t = self.size(2 * n);
                within(s, limits.states)
                    && within(t, limits.tuples)
                    && within(s.zip(t).and_then(|(s, t)| s.checked_mul(t)), limits.work)
            }
            Strategy::CharacterSum => within(self.size(self.coords()), limits.char_sum),
        }
    }

    /// Cheapest feasible strategy, direct enumeration first.
    pub fn choose(&self, limits: &Limits) -> Result<Strategy, OracleError> {
        [Strategy::Direct, Strategy::Convolution, Strategy::CharacterSum]
            .into_iter()
            .find(|s| self.feasible(*s, limits))
            .ok_or_else(|| {
                OracleError::ResourceLimit(format!(
                    "no counting strategy fits k = {}, n = {}, p^e = {}^{}; use smaller parameters or raise {ENV_MAX_STATES}",
                    self.k,
                    self.b.n(),
                    self.p,
                    self.e
                ))
            })
    }
}

/// Count with the cheapest strategy allowed by the environment caps.
pub fn count_reps(job: &CountJob) -> Result<BigInt, OracleError> {
    let limits = Limits::from_env();
    count_reps_with(job, job.choose(&limits)?, &limits)
}

pub fn count_reps_with(
    job: &CountJob,
    strategy: Strategy,
    limits: &Limits,
) -> Result<BigInt, OracleError> {
    let s = job.setup()?;
    if !job.feasible(strategy, limits) {
        return Err(OracleError::ResourceLimit(format!(
            "{strategy:?} for k = {}, p^e = {}^{}",
            job.k, job.p, job.e
        )));
    }
    match strategy {
        Strategy::Direct => Ok(BigInt::from(count_direct(&s))),
        Strategy::Convolution => count_convolution(&s).map(BigInt::from),
        Strategy::CharacterSum => {
            let prof = character_profile(&s);
            let n = s.n as i64;
            let scale = rational_pow(
                &int(s.p as i64),
                i64::from(s.e) * (2 * s.k as i64 * n - n * (n + 1) / 2),
            );
            let c = prof.alpha(s.k) * scale;
            if !c.is_integer() {
                return Err(OracleError::BadCharacterSum(c.to_string()));
            }
            Ok(c.to_integer())
        }
    }
}

/// Gram-state coordinates contributed by one hyperbolic plane `(u, v)`.
fn plane_states(s: &Setup) -> Vec<u64> {
    let (n, q) = (s.n, s.q);
    let total = q.pow(2 * n as u32);
    let c = n * (n + 1) / 2;
    let mut out = Vec::with_capacity(total as usize * c);
    let mut digits = vec![0u64; 2 * n];
    for _ in 0..total {
        let (u, v) = digits.split_at(n);
        for i in 0..n {
            for j in i..n {
                let x = if i == j {
                    u[i] * v[i] % q
                } else {
                    (u[i] * v[j] + u[j] * v[i]) % q
                };
                out.push(x);
            }
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < q {
                break;
            }
            *d = 0;
        }
    }
    out
}

fn count_direct(s: &Setup) -> u64 {
    let c = s.n * (s.n + 1) / 2;
    let planes = plane_states(s);
    let per = planes.len() / c;
    let q = s.q;

    fn rec(
        planes: &[u64],
        c: usize,
        per: usize,
        q: u64,
        left: usize,
        acc: &mut [u64],
        target: &[u64],
    ) -> u64 {
        if left == 0 {
            return u64::from(acc == target);
        }
        let mut total = 0;
        for t in 0..per {
            let st = &planes[t * c..(t + 1) * c];
            for (a, x) in acc.iter_mut().zip(st) {
                *a = (*a + x) % q;
            }
            total += rec(planes, c, per, q, left - 1, acc, target);
            for (a, x) in acc.iter_mut().zip(st) {
                *a = (*a + q - x) % q;
            }
        }
        total
    }

    (0..per)
        .into_par_iter()
        .map(|t| {
            let mut acc = planes[t * c..(t + 1) * c].to_vec();
            rec(&planes, c, per, q, s.k - 1, &mut acc, &s.target)
        })
        .sum()
}

fn encode(coords: &[u64], q: u64) -> usize {
    coords.iter().rev().fold(0u64, |acc, &x| acc * q + x) as usize
}

fn decode(mut idx: usize, q: u64, c: usize) -> Vec<u64> {
    (0..c)
        .map(|_| {
            let d = idx as u64 % q;
            idx /= q as usize;
            d
        })
        .collect()
}

fn count_convolution(s: &Setup) -> Result<u128, OracleError> {
    let c = s.n * (s.n + 1) / 2;
    let q = s.q;
    let states = q.pow(c as u32) as usize;
    let planes = plane_states(s);
    let mut dist = vec![0u128; states];
    for st in planes.chunks(c) {
        dist[encode(st, q)] += 1;
    }
    let support: Vec<(Vec<u64>, u128)> = dist
        .iter()
        .enumerate()
        .filter(|(_, &m)| m != 0)
        .map(|(i, &m)| (decode(i, q, c), m))
        .collect();
    let overflow = || OracleError::ResourceLimit("representation count overflows 128 bits".into());
    let mut acc = dist;
    for _ in 1..s.k {
        // next[x] = sum_t acc[x - t] * w_t
        let next: Option<Vec<u128>> = (0..states)
            .into_par_iter()
            .map(|i| {
                let x = decode(i, q, c);
                let mut diff = vec![0u64; c];
                let mut total: u128 = 0;
                for (t, w) in &support {
                    for ((z, a), b) in diff.iter_mut().zip(&x).zip(t) {
                        *z = (a + q - b) % q;
                    }
                    let m = acc[encode(&diff, q)];
                    if m != 0 {
                        total = total.checked_add(m.checked_mul(*w)?)?;
                    }
                }
                Some(total)
            })
            .collect();
        acc = next.ok_or_else(overflow)?;
    }
    Ok(acc[encode(&s.target, q)])
}

/// `alpha_k = sum_r p^{-k r} coeff[r]`, valid for every `k` at a fixed `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharProfile {
    pub p: u64,
    pub coeffs: Vec<Rational>,
}

impl CharProfile {
    pub fn alpha(&self, k: usize) -> Rational {
        let pk = rational_pow(&int(self.p as i64), -(k as i64));
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * &pk + c)
    }
}

fn val(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 && v < cap {
        x /= p;
        v += 1;
    }
    v
}

/// `sum_i (e - min(d_i, e))` over the elementary divisors `p^{d_i}` of a
/// symmetric matrix mod `p^e`, given as its upper triangle.
fn rank_deficit(upper: &[u64], n: usize, p: u64, e: u32, q: u64) -> u32 {
    let mut m = vec![0i64; n * n];
    let mut idx = 0;
    for i in 0..n {
        for j in i..n {
            m[i * n + j] = upper[idx] as i64;
            m[j * n + i] = upper[idx] as i64;
            idx += 1;
        }
    }
    let qi = q as i64;
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut r = 0;
    while !rows.is_empty() {
        let mut best = (e, 0, 0);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                let v = val(m[i * n + j] as u64, p, e);
                if v < best.0 {
                    best = (v, a, b);
                }
            }
        }
        let (v, a, b) = best;
        if v == e {
            break;
        }
        r += e - v;
        let (pr, pc) = (rows.swap_remove(a), cols.swap_remove(b));
        let pv = p.pow(v) as i64;
        let inv = mod_inverse((m[pr * n + pc] / pv) as u64 % q, q).expect("unit") as i64;
        for &i in &rows {
            let f = (m[i * n + pc] / pv) % qi * inv % qi;
            if f != 0 {
                for &j in &cols {
                    m[i * n + j] = (m[i * n + j] - f * m[pr * n + j] % qi).rem_euclid(qi);
                }
            }
        }
    }
    r
}

#[derive(Clone)]
struct Tally {
    zero: Vec<u64>,
    edge: Vec<u64>,
}

impl Tally {
    fn new(len: usize) -> Self {
        Self {
            zero: vec![0; len],
            edge: vec![0; len],
        }
    }

    fn merge(mut self, o: Tally) -> Tally {
        for (a, b) in self.zero.iter_mut().zip(o.zero) {
            *a += b;
        }
        for (a, b) in self.edge.iter_mut().zip(o.edge) {
            *a += b;
        }
        self
    }

    #[inline]
    fn add(&mut self, r: u32, phi: u64, q_over_p: u64) {
        if phi == 0 {
            self.zero[r as usize] += 1;
        } else if phi % q_over_p == 0 {
            self.edge[r as usize] += 1;
        }
    }
}

/// Sweeps all symmetric `Y` mod `p^e`. Summing the phase `psi(-tr(Y B))`
/// over a unit orbit leaves `1` when it vanishes, `-1/(p-1)` when it has
/// valuation `e - 1`, and `0` otherwise.
fn character_profile(s: &Setup) -> CharProfile {
    let (n, p, e, q) = (s.n, s.p, s.e, s.q);
    let len = (n as u32 * e + 1) as usize;
    let qp = q / p;
    let t = &s.target;
    let vals: Vec<u32> = (0..q).map(|x| val(x, p, e)).collect();
    let tally = match n {
        1 => {
            let mut tl = Tally::new(len);
            for y in 0..q {
                tl.add(e - vals[y as usize], y * t[0] % q, qp);
            }
            tl
        }
        2 => (0..q)
            .into_par_iter()
            .fold(
                || Tally::new(len),
                |mut tl, a| {
                    let va = vals[a as usize];
                    let pa = a * t[0] % q;
                    for c in 0..q {
                        let vac = va.min(vals[c as usize]);
                        let pac = (pa + c * t[2]) % q;
                        let ac = (a * c) as i128;
                        for b in 0..q {
                            let d1 = vac.min(vals[b as usize]);
                            let phi = (pac + b * t[1]) % q;
                            let r = if d1 >= e {
                                0
                            } else {
                                let det = ac - (b as i128) * (b as i128);
                                let d2 = if det == 0 {
                                    e
                                } else {
                                    let mut x = det.unsigned_abs();
                                    let mut v = 0u32;
                                    while x % p as u128 == 0 && v < d1 + e {
                                        x /= p as u128;
                                        v += 1;
                                    }
                                    (v - d1).min(e)
                                };
                                2 * e - d1 - d2
                            };
                            tl.add(r, phi, qp);
                        }
                    }
                    tl
                },
            )
            .reduce(|| Tally::new(len), Tally::merge),
        _ => {
            let c = n * (n + 1) / 2;
            let total = q.pow(c as u32);
            (0..total / q)
                .into_par_iter()
                .fold(
                    || Tally::new(len),
                    |mut tl, hi| {
                        let mut y = decode(hi as usize, q, c - 1);
                        y.insert(0, 0);
                        let base: u64 = y[1..]
                            .iter()
                            .zip(&t[1..])
                            .map(|(a, b)| a * b % q)
                            .sum::<u64>()
                            % q;
                        for lo in 0..q {
                            y[0] = lo;
                            let r = rank_deficit(&y, n, p, e, q);
                            tl.add(r, (base + lo * t[0]) % q, qp);
                        }
                        tl
                    },
                )
                .reduce(|| Tally::new(len), Tally::merge)
        }
    };
    let pm1 = int(p as i64 - 1);
    let coeffs = tally
        .zero
        .iter()
        .zip(&tally.edge)
        .map(|(&z, &w)| int(z as i64) - int(w as i64) / &pm1)
        .collect();
    CharProfile { p, coeffs }
}

/// Smallest precision at which the density is taken, `2 ord(det 2B) + 1`.
pub fn stable_precision(b: &HalfIntMat, ctx: &PrimeContext) -> Result<u32, OracleError> {
    let d = b.det() * rational_pow(&int(2), b.n() as i64);
    match ordp(ctx, &d) {
        Valuation::Finite(v) if v >= 0 => Ok(2 * v as u32 + 1),
        Valuation::Finite(v) => Err(OracleError::InvalidJob(format!(
            "ord det 2B = {v} is negative"
        ))),
        Valuation::Infinite => Err(QuadFormError::Degenerate.into()),
    }
}

/// `alpha_p(H_k, B)` for each `k` at precision `e`.
fn alphas_at(
    b: &HalfIntMat,
    ctx: &PrimeContext,
    e: u32,
    ks: &[usize],
    limits: &Limits,
) -> Result<Vec<Rational>, OracleError> {
    let n = b.n() as i64;
    let p = ctx.p();
    let jobs: Vec<CountJob> = ks
        .iter()
        .map(|&k| CountJob::new(k, b.clone(), p, e))
        .collect();
    let cheap = jobs
        .iter()
        .all(|j| j.feasible(Strategy::Direct, limits) || j.feasible(Strategy::Convolution, limits));
    if !cheap && jobs[0].feasible(Strategy::CharacterSum, limits) {
        let prof = character_profile(&jobs[0].setup()?);
        return Ok(ks.iter().map(|&k| prof.alpha(k)).collect());
    }
    jobs.iter()
        .map(|j| {
            let count = count_reps_with(j, j.choose(limits)?, limits)?;
            let k = j.k as i64;
            let scale = rational_pow(&int(p as i64), i64::from(e) * (n * (n + 1) / 2 - 2 * k * n));
            Ok(Rational::from_integer(count) * scale)
        })
        .collect()
}

/// Densities at the stable precision, each confirmed one step higher.
pub fn alphas(
    b: &HalfIntMat,
    ctx: &PrimeContext,
    ks: &[usize],
    limits: &Limits,
) -> Result<Vec<Rational>, OracleError> {
    if let Some(&k) = ks.iter().find(|&&k| k < b.n()) {
        return Err(OracleError::InvalidJob(format!(
            "k = {k} is below the size {}",
            b.n()
        )));
    }
    let e = stable_precision(b, ctx)?;
    let lo = alphas_at(b, ctx, e, ks, limits)?;
    let hi = alphas_at(b, ctx, e + 1, ks, limits)?;
    for ((&k, a), c) in ks.iter().zip(&lo).zip(&hi) {
        if a != c {
            return Err(OracleError::Unstable {
                k,
                e,
                lo: a.to_string(),
                hi: c.to_string(),
            });
        }
    }
    Ok(lo)
}

pub fn alpha(k: usize, b: &HalfIntMat, ctx: &PrimeContext) -> Result<Rational, OracleError> {
    Ok(alphas(b, ctx, &[k], &Limits::from_env())?.remove(0))
}

/// Coefficients, lowest first, of the polynomial of degree `< xs.len()`
/// through the given points.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Vec<Rational> {
    let m = xs.len();
    // Newton divided differences
    let mut dd = ys.to_vec();
    for j in 1..m {
        for i in (j..m).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut out = vec![Rational::zero(); m];
    for i in (0..m).rev() {
        // out = out * (X - xs[i]) + dd[i]
        let mut next = vec![Rational::zero(); m];
        for d in 0..m {
            if out[d].is_zero() {
                continue;
            }
            next[d] -= &out[d] * &xs[i];
            if d + 1 < m {
                next[d + 1] += &out[d];
            }
        }
        next[0] += &dd[i];
        out = next;
    }
    out
}

/// Sample points `k = n, ..., n + e_B` and the values `F(p^{-k})`.
pub fn samples(
    b: &HalfIntMat,
    ctx: &PrimeContext,
    limits: &Limits,
) -> Result<BTreeMap<usize, Rational>, OracleError> {
    let n = b.n();
    let deg = e_b(b, ctx)?;
    let ks: Vec<usize> = (n..=n + deg as usize).collect();
    Ok(ks
        .iter()
        .copied()
        .zip(alphas(b, ctx, &ks, limits)?)
        .collect())
}

fn f_from_samples(
    b: &HalfIntMat,
    ctx: &PrimeContext,
    alphas: &BTreeMap<usize, Rational>,
) -> Result<Vec<Rational>, OracleError> {
    let p = ctx.p();
    let xi = xi_b(b, ctx)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&k, a) in alphas {
        let x = rational_pow(&int(p as i64), -(k as i64));
        ys.push(a / gamma_q(b.n(), p, xi, &x)?);
        xs.push(x);
    }
    let mut coeffs = interpolate(&xs, &ys);
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    Ok(coeffs)
}

fn to_integers(c: &[Rational]) -> Result<Vec<BigInt>, OracleError> {
    c.iter()
        .map(|x| {
            if x.is_integer() {
                Ok(x.to_integer())
            } else {
                Err(OracleError::NonIntegral(x.to_string()))
            }
        })
        .collect()
}

/// `F(B, X)` of degree `e_B` through the densities at `X = p^{-k}`.
pub fn interpolate_f(b: &HalfIntMat, ctx: &PrimeContext) -> Result<Vec<BigInt>, OracleError> {
    let s = samples(b, ctx, &Limits::from_env())?;
    to_integers(&f_from_samples(b, ctx, &s)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Mismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub alphas: BTreeMap<usize, Rational>,
    pub f_interp: Vec<Rational>,
    pub f_formula: Vec<BigInt>,
    pub verdict: Verdict,
}

impl DensityReport {
    pub fn is_match(&self) -> bool {
        self.verdict == Verdict::Match
    }

    pub fn to_json(&self) -> Value {
        let alphas: serde_json::Map<String, Value> = self
            .alphas
            .iter()
            .map(|(k, a)| (k.to_string(), Value::String(a.to_string())))
            .collect();
        let mut v = json!({
            "alphas": alphas,
            "f_interp": self.f_interp.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "f_formula": self.f_formula.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "verdict": if self.is_match() { "match" } else { "mismatch" },
        });
        if let Verdict::Mismatch(d) = &self.verdict {
            v["detail"] = Value::String(d.clone());
        }
        v
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Largest hyperbolic rank the oracle may use.
    pub max_k: Option<usize>,
    pub limits: Option<Limits>,
}

/// Compares the interpolated `F` with the one from the EGK pipeline.
pub fn verify(
    b: &HalfIntMat,
    ctx: &PrimeContext,
    cert: Option<&DyadicCert>,
    opts: &VerifyOptions,
) -> Result<DensityReport, OracleError> {
    let limits = opts.limits.unwrap_or_else(Limits::from_env);
    let formula = f_tilde_matrix(b, ctx, cert)?;
    let top = b.n() + formula.e_b as usize;
    if let Some(m) = opts.max_k.filter(|&m| top > m) {
        return Err(OracleError::ResourceLimit(format!(
            "interpolation needs k up to {top}, above --max-k {m}"
        )));
    }
    let alphas = samples(b, ctx, &limits)?;
    let f_interp = f_from_samples(b, ctx, &alphas)?;
    let verdict = match to_integers(&f_interp) {
        Err(e) => Verdict::Mismatch(e.to_string()),
        Ok(c) if c == formula.f_poly => Verdict::Match,
        Ok(c) => Verdict::Mismatch(format!(
            "oracle gives {}, formula gives {}",
            crate::siegel::render_poly(&c),
            formula.render_f()
        )),
    };
    Ok(DensityReport {
        alphas,
        f_interp,
        f_formula: formula.f_poly,
        verdict,
    })
}

/// `true` when `a` is a non-negative rational whose denominator is a power of `p`.
pub fn is_p_power_fraction(a: &Rational, p: u64) -> bool {
    if a.is_negative() {
        return false;
    }
    let mut d = a.denom().clone();
    let pb = BigInt::from(p);
    while (&d % &pb).is_zero() {
        d /= &pb;
    }
    d.is_one()
}
