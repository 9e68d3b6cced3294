//! Naive EGK data, EGK data and the Laurent polynomials attached to them.
//!
//! A naive datum `(a_1..a_n; eps_1..eps_n)` refines an EGK datum
//! `(n_1..n_r; m_1..m_r; zeta_1..zeta_r)`; the projection [`upsilon`] reads
//! the signs off at block ends and [`lift`] goes the other way.

mod closed;
mod functions;
mod identities;
mod laurent;
mod lift;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{sign_pow, ExactError};

pub use closed::{deg2_closed, deg3_closed};
pub use functions::{c_func, c_i, d_func};
pub use identities::{prop43_even, prop43_odd, Prop43Case};
pub(crate) use laurent::{base_case, recursion_step};
pub use laurent::{f_closed, f_recursive, f_tilde_egk};
pub use lift::{lift, lift_one, penultimate_sign, LiftMode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EgkError {
    #[error("naive EGK datum violates ({clause}) at index {index}: {detail}")]
    InvalidNaive {
        clause: &'static str,
        index: usize,
        detail: String,
    },
    #[error("EGK datum violates ({clause}) at block {index}: {detail}")]
    InvalidEgk {
        clause: &'static str,
        index: usize,
        detail: String,
    },
    #[error("expected a datum of length {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("exponentiation of a zero sign at index {0}")]
    ZeroBase(usize),
    #[error("no naive lift found for {0}")]
    NoLift(String),
    #[error("identity does not apply: {0}")]
    NotApplicable(&'static str),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Naive EGK datum `(a; eps)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NaiveEGK {
    pub a: Vec<u32>,
    pub eps: Vec<i8>,
}

impl NaiveEGK {
    pub fn new(a: Vec<u32>, eps: Vec<i8>) -> Result<Self, EgkError> {
        let h = Self { a, eps };
        validate_naive(&h)?;
        Ok(h)
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// The datum of the first `k` entries.
    pub fn truncate(&self, k: usize) -> NaiveEGK {
        NaiveEGK {
            a: self.a[..k].to_vec(),
            eps: self.eps[..k].to_vec(),
        }
    }

    /// `eps_i` with 1-based `i`; `eps_0 = 1` by convention.
    pub(crate) fn eps_at(&self, i: usize) -> i8 {
        if i == 0 {
            1
        } else {
            self.eps[i - 1]
        }
    }
}

/// EGK datum `(n_s; m_s; zeta_s)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EGKDatum {
    pub n: Vec<usize>,
    pub m: Vec<u32>,
    pub zeta: Vec<i8>,
}

impl EGKDatum {
    pub fn new(n: Vec<usize>, m: Vec<u32>, zeta: Vec<i8>) -> Result<Self, EgkError> {
        let g = Self { n, m, zeta };
        validate_egk(&g)?;
        Ok(g)
    }

    /// Total length `n_1 + ... + n_r`.
    pub fn len(&self) -> usize {
        self.n.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    /// The exponent sequence with each `m_s` repeated `n_s` times.
    pub fn expanded(&self) -> Vec<u32> {
        self.n
            .iter()
            .zip(&self.m)
            .flat_map(|(&k, &m)| std::iter::repeat(m).take(k))
            .collect()
    }

    /// Cumulative block ends `n_s^*`.
    pub fn block_ends(&self) -> Vec<usize> {
        self.n
            .iter()
            .scan(0, |acc, &k| {
                *acc += k;
                Some(*acc)
            })
            .collect()
    }
}

impl std::fmt::Display for EGKDatum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let j = |v: Vec<String>| v.join(",");
        write!(
            f,
            "({}; {}; {})",
            j(self.n.iter().map(|x| x.to_string()).collect()),
            j(self.m.iter().map(|x| x.to_string()).collect()),
            j(self.zeta.iter().map(|x| x.to_string()).collect())
        )
    }
}

impl std::fmt::Display for NaiveEGK {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let j = |v: Vec<String>| v.join(",");
        write!(
            f,
            "({}; {})",
            j(self.a.iter().map(|x| x.to_string()).collect()),
            j(self.eps.iter().map(|x| x.to_string()).collect())
        )
    }
}

/// Run-length blocks `(n_s, m_s)` of a non-decreasing sequence.
pub fn blocks(a: &[u32]) -> Vec<(usize, u32)> {
    let mut out: Vec<(usize, u32)> = Vec::new();
    for &x in a {
        match out.last_mut() {
            Some((k, m)) if *m == x => *k += 1,
            _ => out.push((1, x)),
        }
    }
    out
}

/// `e_0..e_n`: partial sums for odd `i`, rounded down to even for even `i`.
pub fn e_seq(a: &[u32]) -> Vec<i64> {
    let mut out = vec![0i64];
    let mut s = 0i64;
    for (idx, &x) in a.iter().enumerate() {
        s += i64::from(x);
        let i = idx + 1;
        out.push(if i % 2 == 1 { s } else { 2 * (s / 2) });
    }
    out
}

fn naive_err(clause: &'static str, index: usize, detail: String) -> EgkError {
    EgkError::InvalidNaive {
        clause,
        index,
        detail,
    }
}

pub fn validate_naive(h: &NaiveEGK) -> Result<(), EgkError> {
    let n = h.a.len();
    if h.eps.len() != n {
        return Err(EgkError::WrongLength {
            expected: n,
            got: h.eps.len(),
        });
    }
    if n == 0 {
        return Err(naive_err("N1", 0, "empty datum".into()));
    }
    if let Some(i) = h.eps.iter().position(|e| !(-1..=1).contains(e)) {
        return Err(naive_err(
            "N2",
            i + 1,
            format!("sign {} not in {{-1,0,1}}", h.eps[i]),
        ));
    }
    for i in 1..n {
        if h.a[i - 1] > h.a[i] {
            return Err(naive_err("N1", i + 1, "a is not non-decreasing".into()));
        }
    }
    let mut partial = 0u64;
    for i in 1..=n {
        let prev_partial = partial;
        partial += u64::from(h.a[i - 1]);
        let e = h.eps[i - 1];
        if i % 2 == 0 {
            if (e != 0) != (partial % 2 == 0) {
                return Err(naive_err(
                    "N2",
                    i,
                    format!("a_1+..+a_{i} = {partial} but eps_{i} = {e}"),
                ));
            }
        } else if e == 0 {
            return Err(naive_err("N3", i, "odd index with eps = 0".into()));
        }
        if i == 1 && e != 1 {
            return Err(naive_err("N4", 1, format!("eps_1 = {e}")));
        }
        if i >= 3 && i % 2 == 1 && prev_partial % 2 == 0 {
            let exp = i64::from(h.a[i - 1] + h.a[i - 2]);
            let base = sign_pow(h.eps[i - 2], exp).ok_or(EgkError::ZeroBase(i - 1))?;
            let want = base * h.eps[i - 3];
            if e != want {
                return Err(naive_err(
                    "N5",
                    i,
                    format!("eps_{i} = {e}, expected {want}"),
                ));
            }
        }
    }
    Ok(())
}

fn egk_err(clause: &'static str, index: usize, detail: String) -> EgkError {
    EgkError::InvalidEgk {
        clause,
        index,
        detail,
    }
}

/// Product `zeta_{hi-1}^{m_hi + m_{hi-1}} ... zeta_lo^{m_{lo+1} + m_lo}` over
/// 1-based block indices `lo..hi`.
fn chain_product(g: &EGKDatum, lo: usize, hi: usize) -> Result<i8, EgkError> {
    let mut acc = 1i8;
    for k in lo..hi {
        let exp = i64::from(g.m[k] + g.m[k - 1]);
        acc *= sign_pow(g.zeta[k - 1], exp).ok_or(EgkError::ZeroBase(k))?;
    }
    Ok(acc)
}

pub fn validate_egk(g: &EGKDatum) -> Result<(), EgkError> {
    let r = g.n.len();
    if g.m.len() != r || g.zeta.len() != r {
        return Err(EgkError::WrongLength {
            expected: r,
            got: g.m.len().min(g.zeta.len()),
        });
    }
    if r == 0 {
        return Err(egk_err("E1", 0, "empty datum".into()));
    }
    if let Some(s) = g.n.iter().position(|&k| k == 0) {
        return Err(egk_err("E1", s + 1, "block size must be positive".into()));
    }
    if let Some(s) = g.zeta.iter().position(|z| !(-1..=1).contains(z)) {
        return Err(egk_err(
            "E2",
            s + 1,
            format!("sign {} not in {{-1,0,1}}", g.zeta[s]),
        ));
    }
    for s in 1..r {
        if g.m[s - 1] >= g.m[s] {
            return Err(egk_err("E1", s + 1, "m is not strictly increasing".into()));
        }
    }
    let ends = g.block_ends();
    let mut weighted = 0u64; // m_1 n_1 + ... + m_s n_s
    for s in 1..=r {
        let before = weighted;
        weighted += u64::from(g.m[s - 1]) * g.n[s - 1] as u64;
        let z = g.zeta[s - 1];
        if ends[s - 1] % 2 == 0 {
            if (z != 0) != (weighted % 2 == 0) {
                return Err(egk_err(
                    "E2",
                    s,
                    format!("m_1n_1+..+m_{s}n_{s} = {weighted} but zeta_{s} = {z}"),
                ));
            }
            continue;
        }
        if z == 0 {
            return Err(egk_err("E3", s, "odd n_s^* with zeta = 0".into()));
        }
        let last_odd = (1..s).rev().find(|&t| ends[t - 1] % 2 == 1);
        match last_odd {
            None => {
                let want = chain_product(g, 1, s)?;
                if z != want {
                    return Err(egk_err(
                        "E3a",
                        s,
                        format!("zeta_{s} = {z}, expected {want}"),
                    ));
                }
            }
            Some(t) => {
                // a_1 + ... + a_{n_s^* - 1}
                let partial = before + u64::from(g.m[s - 1]) * (g.n[s - 1] as u64 - 1);
                if partial % 2 == 0 {
                    let want = chain_product(g, t + 1, s)? * g.zeta[t - 1];
                    if z != want {
                        return Err(egk_err(
                            "E3b",
                            s,
                            format!("zeta_{s} = {z}, expected {want}"),
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Projection of a naive datum onto its EGK datum.
pub fn upsilon(h: &NaiveEGK) -> Result<EGKDatum, EgkError> {
    validate_naive(h)?;
    let bl = blocks(&h.a);
    let mut end = 0;
    let mut zeta = Vec::with_capacity(bl.len());
    for &(k, _) in &bl {
        end += k;
        zeta.push(h.eps[end - 1]);
    }
    Ok(EGKDatum {
        n: bl.iter().map(|b| b.0).collect(),
        m: bl.iter().map(|b| b.1).collect(),
        zeta,
    })
}

/// Every valid naive datum with `len = n` and entries `a_i <= max_a`.
pub fn enumerate_naive(n: usize, max_a: u32) -> Vec<NaiveEGK> {
    let mut out = Vec::new();
    let mut a = Vec::with_capacity(n);
    fn rec_a(n: usize, max_a: u32, a: &mut Vec<u32>, out: &mut Vec<NaiveEGK>) {
        if a.len() == n {
            let mut eps = Vec::with_capacity(n);
            rec_eps(a, &mut eps, out);
            return;
        }
        let lo = a.last().copied().unwrap_or(0);
        for x in lo..=max_a {
            a.push(x);
            rec_a(n, max_a, a, out);
            a.pop();
        }
    }
    fn rec_eps(a: &[u32], eps: &mut Vec<i8>, out: &mut Vec<NaiveEGK>) {
        if eps.len() == a.len() {
            out.push(NaiveEGK {
                a: a.to_vec(),
                eps: eps.clone(),
            });
            return;
        }
        for e in [1i8, -1, 0] {
            eps.push(e);
            let k = eps.len();
            let h = NaiveEGK {
                a: a[..k].to_vec(),
                eps: eps.clone(),
            };
            if validate_naive(&h).is_ok() {
                rec_eps(a, eps, out);
            }
            eps.pop();
        }
    }
    rec_a(n, max_a, &mut a, &mut out);
    out
}

/// Every valid EGK datum of length `n` with all `m_s <= max_m`.
pub fn enumerate_egk(n: usize, max_m: u32) -> Vec<EGKDatum> {
    let mut out = Vec::new();
    // compositions of n
    fn compositions(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut v = Vec::new();
        for first in 1..=n {
            for mut rest in compositions(n - first) {
                rest.insert(0, first);
                v.push(rest);
            }
        }
        v
    }
    fn increasing(r: usize, lo: u32, max: u32) -> Vec<Vec<u32>> {
        if r == 0 {
            return vec![vec![]];
        }
        let mut v = Vec::new();
        for first in lo..=max {
            for mut rest in increasing(r - 1, first + 1, max) {
                rest.insert(0, first);
                v.push(rest);
            }
        }
        v
    }
    for comp in compositions(n) {
        let r = comp.len();
        for m in increasing(r, 0, max_m) {
            for code in 0..3usize.pow(r as u32) {
                let mut c = code;
                let zeta: Vec<i8> = (0..r)
                    .map(|_| {
                        let z = [1i8, -1, 0][c % 3];
                        c /= 3;
                        z
                    })
                    .collect();
                let g = EGKDatum {
                    n: comp.clone(),
                    m: m.clone(),
                    zeta,
                };
                if validate_egk(&g).is_ok() {
                    out.push(g);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn naive_validation_examples() {
        let bad = NaiveEGK {
            a: vec![0, 1],
            eps: vec![1, -1],
        };
        assert!(matches!(
            validate_naive(&bad),
            Err(EgkError::InvalidNaive {
                clause: "N2",
                index: 2,
                ..
            })
        ));
        assert!(validate_naive(&NaiveEGK {
            a: vec![0, 2],
            eps: vec![1, 1]
        })
        .is_ok());
        let bad = NaiveEGK {
            a: vec![1, 1, 1],
            eps: vec![1, 0, 1],
        };
        assert!(matches!(
            validate_naive(&bad),
            Err(EgkError::InvalidNaive { clause: "N2", .. })
        ));
        let bad = NaiveEGK {
            a: vec![1],
            eps: vec![-1],
        };
        assert!(matches!(
            validate_naive(&bad),
            Err(EgkError::InvalidNaive { clause: "N4", .. })
        ));
    }

    #[test]
    fn egk_validation_examples() {
        assert!(EGKDatum::new(vec![1], vec![0], vec![1]).is_ok());
        assert!(EGKDatum::new(vec![1, 1], vec![0, 1], vec![1, 0]).is_ok());
        assert!(matches!(
            EGKDatum::new(vec![1], vec![0], vec![-1]),
            Err(EgkError::InvalidEgk { clause: "E3a", .. })
        ));
        assert!(matches!(
            EGKDatum::new(vec![1, 1], vec![1, 1], vec![1, 1]),
            Err(EgkError::InvalidEgk { clause: "E1", .. })
        ));
    }

    #[test]
    fn upsilon_examples() {
        let g = upsilon(&NaiveEGK::new(vec![0, 1], vec![1, 0]).unwrap()).unwrap();
        assert_eq!(
            g,
            EGKDatum::new(vec![1, 1], vec![0, 1], vec![1, 0]).unwrap()
        );
        let g = upsilon(&NaiveEGK::new(vec![2], vec![1]).unwrap()).unwrap();
        assert_eq!(g, EGKDatum::new(vec![1], vec![2], vec![1]).unwrap());
        for z in [1, -1] {
            let g = upsilon(&NaiveEGK::new(vec![1, 1], vec![1, z]).unwrap()).unwrap();
            assert_eq!(g, EGKDatum::new(vec![2], vec![1], vec![z]).unwrap());
        }
    }

    #[test]
    fn e_seq_rounds_even_positions() {
        assert_eq!(e_seq(&[1, 2, 2]), vec![0, 1, 2, 5]);
        assert_eq!(e_seq(&[0, 1]), vec![0, 0, 0]);
    }

    /// The image of the naive data under the projection is exactly the set
    /// of data accepted by `validate_egk`.
    #[test]
    fn upsilon_image_is_the_egk_set() {
        for n in 1..=5 {
            let image: HashSet<EGKDatum> = enumerate_naive(n, 3)
                .iter()
                .map(|h| upsilon(h).unwrap())
                .collect();
            let valid: HashSet<EGKDatum> = enumerate_egk(n, 3).into_iter().collect();
            assert_eq!(image, valid, "length {n}");
        }
    }
}
