//! A fast embedded property suite, run by `siegelkit selftest`.

use crate::egk::{
    deg2_closed, deg3_closed, enumerate_egk, enumerate_naive, f_closed, f_recursive, f_tilde_egk,
    lift, LiftMode,
};
use crate::exact::{int, rat};
use crate::localfield::{
    bruteforce_precision, conductor_check, disc_valuation, hilbert, hilbert_bruteforce,
    hilbert_grid, nonsquare_samples, PrimeContext,
};
use crate::oracle::{verify, VerifyOptions};
use crate::quadform::{GKData, HalfIntMat, Involution};
use crate::siegel::{f_tilde_matrix, f_tilde_recursion_odd, functional_equation_sign, DyadicCert};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub cases: usize,
    pub failure: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn run<F>(name: &'static str, body: F) -> Check
where
    F: FnOnce(&mut usize) -> Result<(), String>,
{
    let mut cases = 0;
    let failure = body(&mut cases).err();
    Check {
        name,
        cases,
        failure,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ctx(p: u64) -> PrimeContext {
    PrimeContext::new(p).expect("prime")
}

/// Sorted diagonal forms `diag(u_i p^{a_i})` with `a_i <= 2`, `u_i in {1, 2}`.
fn small_diagonals(p: u64, n: usize) -> Vec<HalfIntMat> {
    let mut out = Vec::new();
    let total = 6usize.pow(n as u32);
    for idx in 0..total {
        let mut x = idx;
        let mut d: Vec<(u32, i64)> = Vec::with_capacity(n);
        for _ in 0..n {
            d.push(((x % 3) as u32, if (x / 3) % 2 == 0 { 1 } else { 2 }));
            x /= 6;
        }
        if d.windows(2).any(|w| w[0].0 > w[1].0) {
            continue;
        }
        out.push(HalfIntMat::diag_i64(
            &d.iter()
                .map(|&(a, u)| u * (p as i64).pow(a))
                .collect::<Vec<_>>(),
        ));
    }
    out
}

pub fn run_all() -> Vec<Check> {
    vec![
        run("hilbert symbol agrees with brute force", |n| {
            for p in [2u64, 3, 5, 7] {
                let c = ctx(p);
                for &a in &hilbert_grid(p) {
                    for &b in &hilbert_grid(p) {
                        let (a, b) = (int(a), int(b));
                        let e = bruteforce_precision(&c, &a, &b);
                        *n += 1;
                        ensure(
                            hilbert(&c, &a, &b) == hilbert_bruteforce(&c, &a, &b, e),
                            || format!("<{a}, {b}> at {p}"),
                        )?;
                    }
                }
            }
            Ok(())
        }),
        run("discriminant valuation equals conductor", |n| {
            for p in [2u64, 3, 5] {
                let c = ctx(p);
                for d in nonsquare_samples(p) {
                    *n += 1;
                    ensure(
                        disc_valuation(&c, &int(d)) == conductor_check(&c, &int(d)),
                        || format!("{d} at {p}"),
                    )?;
                }
            }
            Ok(())
        }),
        run("recursion equals closed form", |n| {
            for len in 1..=3 {
                for h in enumerate_naive(len, 2) {
                    *n += 1;
                    let f = f_recursive(&h).map_err(|e| e.to_string())?;
                    ensure(f.has_integer_coefficients(), || {
                        format!("non-integral F for {h:?}")
                    })?;
                    ensure(Ok(&f) == f_closed(&h).as_ref(), || format!("{h:?}"))?;
                }
            }
            Ok(())
        }),
        run("F does not depend on the lift", |n| {
            for len in 1..=4 {
                for g in enumerate_egk(len, 2) {
                    *n += 1;
                    let fs = lift(&g, LiftMode::All).map_err(|e| e.to_string())?;
                    let first = f_recursive(&fs[0]).map_err(|e| e.to_string())?;
                    for h in &fs[1..] {
                        ensure(f_recursive(h).as_ref() == Ok(&first), || format!("{g}"))?;
                    }
                }
            }
            Ok(())
        }),
        run("length two and three closed forms", |n| {
            for (len, f) in [(2usize, deg2_closed as fn(&_) -> _), (3, deg3_closed)] {
                for g in enumerate_egk(len, 2) {
                    *n += 1;
                    ensure(f(&g).ok() == f_tilde_egk(&g).ok(), || format!("{g}"))?;
                }
            }
            Ok(())
        }),
        run(
            "diagonal recursion, functional equation, integrality",
            |n| {
                for p in [3u64, 5] {
                    let c = ctx(p);
                    for len in 1..=3 {
                        for b in small_diagonals(p, len) {
                            *n += 1;
                            let r = f_tilde_matrix(&b, &c, None).map_err(|e| e.to_string())?;
                            ensure(
                                f_tilde_recursion_odd(&b, &c).as_ref() == Ok(&r.f_tilde),
                                || format!("{b} at {p}"),
                            )?;
                            functional_equation_sign(&b, &c, None)
                                .map_err(|e| format!("{b} at {p}: {e}"))?;
                            ensure(r.f_poly.len() as i64 == r.e_b + 1, || {
                                format!("degree of F for {b} at {p}")
                            })?;
                        }
                    }
                }
                Ok(())
            },
        ),
        run("local density oracle", |n| {
            let hyp = HalfIntMat::new(vec![vec![int(0), rat(1, 2)], vec![rat(1, 2), int(0)]])
                .expect("symmetric");
            let cert = DyadicCert {
                a: GKData::new(vec![0, 0]).expect("sorted"),
                sigma: Involution::from_one_based(&[2, 1]).expect("involution"),
            };
            let cases: Vec<(HalfIntMat, u64, Option<&DyadicCert>)> = vec![
                (HalfIntMat::diag_i64(&[3]), 3, None),
                (HalfIntMat::diag_i64(&[1, 3]), 3, None),
                (hyp, 2, Some(&cert)),
            ];
            for (b, p, cert) in cases {
                *n += 1;
                let r = verify(&b, &ctx(p), cert, &VerifyOptions::default())
                    .map_err(|e| e.to_string())?;
                ensure(r.is_match(), || format!("{b} at {p}: {:?}", r.verdict))?;
            }
            Ok(())
        }),
    ]
}
