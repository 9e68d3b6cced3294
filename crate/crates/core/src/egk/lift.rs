//! Naive lifts of an EGK datum.

use super::{upsilon, validate_egk, validate_naive, EGKDatum, EgkError, NaiveEGK};
use crate::exact::sign_pow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftMode {
    One,
    All,
}

fn backtrack(
    a: &[u32],
    fixed: &[Option<i8>],
    eps: &mut Vec<i8>,
    out: &mut Vec<NaiveEGK>,
    stop_at_first: bool,
) {
    if stop_at_first && !out.is_empty() {
        return;
    }
    let k = eps.len();
    if k == a.len() {
        out.push(NaiveEGK {
            a: a.to_vec(),
            eps: eps.clone(),
        });
        return;
    }
    let single;
    let candidates: &[i8] = match fixed[k] {
        Some(z) => {
            single = [z];
            &single
        }
        None => &[1, -1, 0],
    };
    for &e in candidates {
        eps.push(e);
        let prefix = NaiveEGK {
            a: a[..=k].to_vec(),
            eps: eps.clone(),
        };
        if validate_naive(&prefix).is_ok() {
            backtrack(a, fixed, eps, out, stop_at_first);
        }
        eps.pop();
    }
}

fn boundary_values(g: &EGKDatum) -> Vec<Option<i8>> {
    let mut fixed = vec![None; g.len()];
    for (s, end) in g.block_ends().into_iter().enumerate() {
        fixed[end - 1] = Some(g.zeta[s]);
    }
    fixed
}

/// Naive data projecting onto `g`: every one of them, or just the first found.
pub fn lift(g: &EGKDatum, mode: LiftMode) -> Result<Vec<NaiveEGK>, EgkError> {
    validate_egk(g)?;
    if mode == LiftMode::One {
        return Ok(vec![lift_one(g)?]);
    }
    let a = g.expanded();
    let fixed = boundary_values(g);
    let mut out = Vec::new();
    backtrack(
        &a,
        &fixed,
        &mut Vec::with_capacity(a.len()),
        &mut out,
        false,
    );
    if out.is_empty() {
        return Err(EgkError::NoLift(g.to_string()));
    }
    Ok(out)
}

/// One lift, built left to right: boundary positions take `zeta_s`, forced
/// positions follow (N2)/(N5), free positions take `+1`.
pub fn lift_one(g: &EGKDatum) -> Result<NaiveEGK, EgkError> {
    validate_egk(g)?;
    let a = g.expanded();
    let fixed = boundary_values(g);
    let mut eps: Vec<i8> = Vec::with_capacity(a.len());
    let mut partial = 0u64;
    for i in 1..=a.len() {
        let prev = partial;
        partial += u64::from(a[i - 1]);
        let e = if let Some(z) = fixed[i - 1] {
            z
        } else if i % 2 == 0 {
            if partial % 2 == 0 {
                1
            } else {
                0
            }
        } else if i >= 3 && prev % 2 == 0 {
            let exp = i64::from(a[i - 1] + a[i - 2]);
            sign_pow(eps[i - 2], exp).ok_or(EgkError::ZeroBase(i - 1))? * eps[i - 3]
        } else {
            1
        };
        eps.push(e);
    }
    let h = NaiveEGK { a, eps };
    if validate_naive(&h).is_ok() && upsilon(&h)? == *g {
        return Ok(h);
    }
    // The greedy choice should always succeed; search as a safeguard.
    let fixed = boundary_values(g);
    let mut out = Vec::new();
    backtrack(&h.a, &fixed, &mut Vec::new(), &mut out, true);
    out.pop().ok_or_else(|| EgkError::NoLift(g.to_string()))
}

/// `eps_{n-1}` as forced by `g`, or `None` in the two cases where a lift
/// may take either sign.
pub fn penultimate_sign(g: &EGKDatum) -> Result<Option<i8>, EgkError> {
    validate_egk(g)?;
    let n = g.len();
    if n < 2 {
        return Err(EgkError::NotApplicable("length below 2"));
    }
    let r = g.n.len();
    let nr = g.n[r - 1];
    if nr == 1 {
        return Ok(Some(g.zeta[r - 2]));
    }
    let a = g.expanded();
    let s_n: u64 = a.iter().map(|&x| u64::from(x)).sum();
    let s_prev = s_n - u64::from(a[n - 1]);
    if n % 2 == 1 {
        return Ok(if s_prev % 2 == 1 { Some(0) } else { None });
    }
    if s_n % 2 == 1 {
        return Ok(None);
    }
    let pow = |k: usize| -> Result<i8, EgkError> {
        // zeta_k^{m_{k+1} + m_k}, 1-based k
        sign_pow(g.zeta[k - 1], i64::from(g.m[k] + g.m[k - 1])).ok_or(EgkError::ZeroBase(k))
    };
    let last_odd = (1..=r).rev().find(|&j| g.n[j - 1] % 2 == 1);
    let value = match last_odd {
        Some(j) if j == r => g.zeta[r - 2],
        None => (1..r).map(pow).product::<Result<i8, _>>()?,
        Some(j) => (j..r).map(pow).product::<Result<i8, _>>()? * g.zeta[j - 2],
    };
    Ok(Some(value))
}
