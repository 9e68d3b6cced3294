//! Reduced forms over `Z_2`: admissible involutions, certification and the
//! EGK datum of a certified form.

use std::collections::BTreeSet;

use num_traits::Zero;

use super::{validate, zeta_of, GKData, HalfIntMat, QuadFormError};
use crate::egk::EGKDatum;
use crate::exact::{int, rational_pow, Rational};
use crate::localfield::{ordp, PrimeContext, Valuation};

/// Involution on `{1..n}`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Involution(Vec<usize>);

impl Involution {
    pub fn from_one_based(images: &[usize]) -> Result<Self, QuadFormError> {
        let n = images.len();
        let mut v = Vec::with_capacity(n);
        for (i, &x) in images.iter().enumerate() {
            if x == 0 || x > n {
                return Err(QuadFormError::BadInvolution(format!(
                    "image {x} of {} is out of range 1..{n}",
                    i + 1
                )));
            }
            v.push(x - 1);
        }
        for (i, &j) in v.iter().enumerate() {
            if v[j] != i {
                return Err(QuadFormError::BadInvolution(format!(
                    "sigma(sigma({})) = {}",
                    i + 1,
                    v[j] + 1
                )));
            }
        }
        Ok(Self(v))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Image of the 0-based index `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    I,
    II,
}

struct Parts {
    p0: BTreeSet<usize>,
    plus: BTreeSet<usize>,
    minus: BTreeSet<usize>,
    /// block index of every position
    block: Vec<usize>,
    /// (first, last) position of every block
    bounds: Vec<(usize, usize)>,
}

fn parts(a: &[u32], sigma: &Involution) -> Parts {
    let mut p = Parts {
        p0: BTreeSet::new(),
        plus: BTreeSet::new(),
        minus: BTreeSet::new(),
        block: Vec::with_capacity(a.len()),
        bounds: Vec::new(),
    };
    for (i, &x) in a.iter().enumerate() {
        let j = sigma.apply(i);
        if i == j {
            p.p0.insert(i);
        } else if x > a[j] {
            p.plus.insert(i);
        } else if x < a[j] {
            p.minus.insert(i);
        }
        if i == 0 || a[i - 1] != x {
            p.bounds.push((i, i));
        }
        let s = p.bounds.len() - 1;
        p.bounds[s].1 = i;
        p.block.push(s);
    }
    p
}

fn inadmissible(clause: &'static str, i: usize, detail: String) -> QuadFormError {
    QuadFormError::Inadmissible {
        clause,
        index: i + 1,
        detail,
    }
}

pub fn check_admissible(a: &GKData, sigma: &Involution) -> Result<(), QuadFormError> {
    let a = a.as_slice();
    if a.len() != sigma.len() {
        return Err(QuadFormError::LengthMismatch {
            expected: a.len(),
            got: sigma.len(),
        });
    }
    let pt = parts(a, sigma);
    let same_parity = |i: usize, j: usize| a[i] % 2 == a[j] % 2;

    if pt.p0.len() > 2 {
        let i = *pt.p0.iter().nth(2).unwrap();
        return Err(inadmissible(
            "i",
            i,
            format!("{} fixed points", pt.p0.len()),
        ));
    }
    if let [i, j] = pt.p0.iter().copied().collect::<Vec<_>>()[..] {
        if same_parity(i, j) {
            return Err(inadmissible(
                "i",
                j,
                "two fixed points of the same parity".into(),
            ));
        }
    }
    for &i in &pt.p0 {
        if pt.bounds[pt.block[i]].1 != i {
            return Err(inadmissible(
                "i",
                i,
                "fixed point is not the last of its block".into(),
            ));
        }
        let top = pt
            .p0
            .iter()
            .chain(&pt.plus)
            .copied()
            .filter(|&j| same_parity(i, j))
            .max();
        if top != Some(i) {
            return Err(inadmissible(
                "i",
                i,
                "fixed point is not the largest same-parity index in P0 ∪ P+".into(),
            ));
        }
    }
    for (s, &(lo, hi)) in pt.bounds.iter().enumerate() {
        let minus: Vec<usize> = pt
            .minus
            .iter()
            .copied()
            .filter(|&i| pt.block[i] == s)
            .collect();
        if minus.len() > 1 {
            return Err(inadmissible(
                "ii",
                minus[1],
                "two elements of P- in one block".into(),
            ));
        }
        if let Some(&i) = minus.first() {
            if i != hi {
                return Err(inadmissible(
                    "ii",
                    i,
                    "element of P- is not the last of its block".into(),
                ));
            }
            let want = pt
                .plus
                .iter()
                .copied()
                .filter(|&j| j > i && same_parity(i, j))
                .min();
            if want != Some(sigma.apply(i)) {
                return Err(inadmissible(
                    "ii",
                    i,
                    "partner is not the least admissible index of P+".into(),
                ));
            }
        }
        let plus: Vec<usize> = pt
            .plus
            .iter()
            .copied()
            .filter(|&i| pt.block[i] == s)
            .collect();
        if plus.len() > 1 {
            return Err(inadmissible(
                "iii",
                plus[1],
                "two elements of P+ in one block".into(),
            ));
        }
        if let Some(&i) = plus.first() {
            if i != lo {
                return Err(inadmissible(
                    "iii",
                    i,
                    "element of P+ is not the first of its block".into(),
                ));
            }
            let want = pt
                .minus
                .iter()
                .copied()
                .filter(|&j| j < i && same_parity(i, j))
                .max();
            if want != Some(sigma.apply(i)) {
                return Err(inadmissible(
                    "iii",
                    i,
                    "partner is not the greatest admissible index of P-".into(),
                ));
            }
        }
    }
    for (i, &x) in a.iter().enumerate() {
        let j = sigma.apply(i);
        if x == a[j] && i.abs_diff(j) > 1 {
            return Err(inadmissible(
                "iv",
                i,
                format!("paired with distant index {}", j + 1),
            ));
        }
    }
    Ok(())
}

fn require_dyadic(ctx: &PrimeContext) -> Result<(), QuadFormError> {
    if !ctx.is_dyadic() {
        return Err(QuadFormError::UnsupportedPrime {
            p: ctx.p(),
            detail: "reduced-form certification is for p = 2",
        });
    }
    Ok(())
}

/// `2 ord(x)`, with `None` for zero.
fn twice_ord(ctx: &PrimeContext, x: &crate::exact::Rational) -> Option<i64> {
    match ordp(ctx, x) {
        Valuation::Finite(v) => Some(2 * v),
        Valuation::Infinite => None,
    }
}

fn not_reduced(clause: &'static str, i: usize, j: usize, detail: String) -> QuadFormError {
    QuadFormError::NotReduced {
        clause,
        i: i + 1,
        j: j + 1,
        detail,
    }
}

pub fn check_reduced(
    b: &HalfIntMat,
    a: &GKData,
    sigma: &Involution,
    ctx: &PrimeContext,
) -> Result<(), QuadFormError> {
    require_dyadic(ctx)?;
    validate(b, ctx)?;
    if b.n() != a.len() {
        return Err(QuadFormError::LengthMismatch {
            expected: b.n(),
            got: a.len(),
        });
    }
    check_admissible(a, sigma)?;
    let av = a.as_slice();
    let pt = parts(av, sigma);
    let n = b.n();
    let two = int(2);
    for i in 0..n {
        let ai = i64::from(av[i]);
        let d = twice_ord(ctx, b.get(i, i));
        if d.is_some_and(|d| d < 2 * ai) {
            return Err(not_reduced("M", i, i, format!("ord(b_ii) < {ai}")));
        }
        if (pt.p0.contains(&i) || pt.minus.contains(&i)) && d != Some(2 * ai) {
            return Err(not_reduced("2", i, i, format!("ord(b_ii) must equal {ai}")));
        }
        for j in i + 1..n {
            let bound = ai + i64::from(av[j]);
            let o = twice_ord(ctx, &(b.get(i, j) * &two));
            if o.is_some_and(|o| o < bound) {
                return Err(not_reduced("M", i, j, format!("2 ord(2b_ij) < {bound}")));
            }
            if sigma.apply(i) == j {
                if o != Some(bound) {
                    return Err(not_reduced(
                        "1",
                        i,
                        j,
                        format!("2 ord(2b_ij) must equal {bound}"),
                    ));
                }
            } else if o.is_some_and(|o| o <= bound) {
                return Err(not_reduced(
                    "3",
                    i,
                    j,
                    format!("2 ord(2b_ij) must exceed {bound}"),
                ));
            }
        }
    }
    Ok(())
}

/// EGK datum of a certified reduced form, read from its principal blocks.
pub fn egk_from_reduced(
    b: &HalfIntMat,
    a: &GKData,
    sigma: &Involution,
    ctx: &PrimeContext,
) -> Result<EGKDatum, QuadFormError> {
    check_reduced(b, a, sigma, ctx)?;
    let bl = a.blocks();
    let mut zeta = Vec::with_capacity(bl.len());
    let mut end = 0;
    for &(k, _) in &bl {
        end += k;
        let c = b.principal(end);
        if c.det().is_zero() {
            return Err(QuadFormError::DegenerateBlock(end));
        }
        zeta.push(zeta_of(&c, ctx)?);
    }
    Ok(EGKDatum::new(
        bl.iter().map(|t| t.0).collect(),
        bl.iter().map(|t| t.1).collect(),
        zeta,
    )?)
}

/// Category I iff `sigma(n-1) = n` and `a_{n-1} = a_n`.
pub fn category(a: &GKData, sigma: &Involution) -> Category {
    let n = a.len();
    if n >= 2 && sigma.apply(n - 2) == n - 1 && a.as_slice()[n - 2] == a.as_slice()[n - 1] {
        Category::I
    } else {
        Category::II
    }
}

/// Element of `M^0(a)` with diagonal `2^{a_i+1} r_ii` and doubled
/// off-diagonal `2^{[(a_i+a_j)/2]+1} r_ij`; `r` lists the upper triangle
/// row by row.
pub fn m0_element(a: &[u32], r: &[i64]) -> HalfIntMat {
    let n = a.len();
    assert_eq!(
        r.len(),
        n * (n + 1) / 2,
        "one coefficient per upper-triangular entry"
    );
    let mut rows = vec![vec![Rational::zero(); n]; n];
    let mut it = r.iter();
    for i in 0..n {
        for j in i..n {
            let c = int(*it.next().unwrap());
            if i == j {
                rows[i][i] = c * rational_pow(&int(2), i64::from(a[i]) + 1);
            } else {
                let v = c * rational_pow(&int(2), i64::from((a[i] + a[j]) / 2));
                rows[i][j] = v.clone();
                rows[j][i] = v;
            }
        }
    }
    HalfIntMat::new(rows).expect("symmetric by construction")
}
