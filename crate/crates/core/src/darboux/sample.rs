//! Sample grids on branch loci.
//!
//! The linear equalities of a branch are solved first; the grid runs over
//! integer combinations `x0 + Σ c_j n_j` of a particular solution and a
//! kernel basis, `c_j ∈ {-R..R}`, so that points satisfying the linear part
//! are never missed. Every point is scaled by a common denominator `D` and
//! all conditions are evaluated in `i128` on the homogenized polynomials,
//! which preserves zeros and signs.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::TreeBranch;
use crate::exactmath::{Poly, RatMatrix, Q};

/// Default coefficient range `R`.
pub const GRID_RANGE: i64 = 2;
/// Default number of points kept per locus.
pub const GRID_CAP: usize = 48;

struct IntPoly {
    /// `(coefficient, exponents, power of the homogenizing variable)`
    terms: Vec<(i128, Vec<u32>, u32)>,
}

impl IntPoly {
    fn new(f: &Poly) -> Option<IntPoly> {
        let d = f.degree().unwrap_or(0);
        let lcm = f.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
        let mut terms = Vec::new();
        for (m, c) in f.terms() {
            let k = (c * Q::from_integer(lcm.clone())).to_integer().to_i128()?;
            terms.push((k, m.exps().to_vec(), d - m.degree()));
        }
        Some(IntPoly { terms })
    }

    /// `D^deg f · f(P / D)`, or `None` on overflow.
    fn eval(&self, p: &[i128], d: i128) -> Option<i128> {
        let mut acc: i128 = 0;
        for (c, exps, h) in &self.terms {
            let mut t = *c;
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    t = t.checked_mul(p[i])?;
                }
            }
            for _ in 0..*h {
                t = t.checked_mul(d)?;
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc)
    }
}

/// Condition compiled for fast evaluation, with an exact fallback.
struct Cond {
    exact: Poly,
    fast: Option<IntPoly>,
}

impl Cond {
    fn new(f: &Poly) -> Cond {
        Cond {
            exact: f.clone(),
            fast: IntPoly::new(f),
        }
    }

    fn sign(&self, p: &[i128], d: i128, exact: &dyn Fn() -> Vec<Q>) -> i32 {
        if let Some(v) = self.fast.as_ref().and_then(|f| f.eval(p, d)) {
            return v.signum() as i32;
        }
        let v = self
            .exact
            .eval(&exact())
            .expect("point has every coordinate");
        crate::exactmath::sign(&v)
    }
}

/// Points of the locus of `branch` that also satisfy `extra` (e.g. the mCYBE
/// system), over the grid with coefficient range `range`, thinned to at
/// most `cap` points: first one point per coordinate sign pattern, then
/// evenly spaced points in enumeration order.
pub fn sample_locus(
    branch: &TreeBranch,
    extra: &[Poly],
    n: usize,
    range: i64,
    cap: usize,
) -> Vec<Vec<Q>> {
    let eqs: Vec<Poly> = branch.equalities.iter().chain(extra).cloned().collect();
    let linear: Vec<&Poly> = eqs
        .iter()
        .filter(|f| f.degree().is_some_and(|d| d <= 1))
        .collect();
    if eqs.iter().any(|f| f.degree() == Some(0)) {
        return Vec::new();
    }
    let a = RatMatrix::from_rows(
        &linear
            .iter()
            .map(|f| {
                (0..n)
                    .map(|i| f.coeff(&crate::exactmath::Monomial::var(i)))
                    .collect()
            })
            .collect::<Vec<_>>(),
        n,
    );
    let b: Vec<Q> = linear.iter().map(|f| -f.constant_term()).collect();
    let Some(x0) = a.solve(&b) else {
        return Vec::new();
    };
    let basis = a.kernel_basis();
    let den = x0
        .iter()
        .chain(basis.iter().flatten())
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let Some(d) = den.to_i128() else {
        return Vec::new();
    };
    let scale = |x: &Q| {
        (x * Q::from_integer(den.clone()))
            .to_integer()
            .to_i128()
            .expect("small grid")
    };
    let p0: Vec<i128> = x0.iter().map(scale).collect();
    let dirs: Vec<Vec<i128>> = basis
        .iter()
        .map(|v| v.iter().map(scale).collect())
        .collect();

    let nonlinear: Vec<Cond> = eqs
        .iter()
        .filter(|f| f.degree().is_some_and(|d| d > 1))
        .map(Cond::new)
        .collect();
    let nonzero: Vec<Cond> = branch.inequalities.iter().map(Cond::new).collect();
    let positive: Vec<Cond> = branch.positive.iter().map(Cond::new).collect();

    let k = dirs.len();
    let width = (2 * range + 1) as usize;
    let total = width.pow(k as u32);
    let mut found: Vec<Vec<i128>> = Vec::new();
    let mut coef = vec![0i128; k];
    let mut p = vec![0i128; n];
    for idx in 0..total {
        let mut r = idx;
        for c in coef.iter_mut() {
            *c = (r % width) as i128 - range as i128;
            r /= width;
        }
        for i in 0..n {
            p[i] = p0[i] + dirs.iter().zip(&coef).map(|(v, c)| v[i] * c).sum::<i128>();
        }
        let exact = || {
            p.iter()
                .map(|&x| Q::new(BigInt::from(x), BigInt::from(d)))
                .collect::<Vec<Q>>()
        };
        let ok = nonlinear.iter().all(|c| c.sign(&p, d, &exact) == 0)
            && nonzero.iter().all(|c| c.sign(&p, d, &exact) != 0)
            && positive.iter().all(|c| c.sign(&p, d, &exact) > 0);
        if ok {
            found.push(p.clone());
        }
    }
    thin(found, cap)
        .into_iter()
        .map(|p| {
            p.into_iter()
                .map(|x| Q::new(BigInt::from(x), BigInt::from(d)))
                .collect()
        })
        .collect()
}

fn thin(found: Vec<Vec<i128>>, cap: usize) -> Vec<Vec<i128>> {
    if found.len() <= cap {
        return found;
    }
    let mut chosen: BTreeSet<usize> = BTreeSet::new();
    let mut patterns: BTreeSet<Vec<i32>> = BTreeSet::new();
    for (i, p) in found.iter().enumerate() {
        if chosen.len() >= cap / 2 {
            break;
        }
        if patterns.insert(p.iter().map(|x| x.signum() as i32).collect()) {
            chosen.insert(i);
        }
    }
    let rest = cap - chosen.len();
    for j in 0..rest {
        chosen.insert(j * found.len() / rest);
    }
    let mut out: Vec<Vec<i128>> = chosen.into_iter().map(|i| found[i].clone()).collect();
    out.truncate(cap);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{q, qi};
    use crate::parse::{parse_poly, Rel};

    fn p(s: &str) -> Poly {
        parse_poly(s, &|_| None).unwrap()
    }

    #[test]
    fn linear_part_is_solved_first() {
        let mut b = TreeBranch::default();
        b.push(p("x3 + 4/3*x4"), Rel::Eq);
        b.push(p("x4"), Rel::Ne);
        for s in ["x1", "x2", "x5", "x6"] {
            b.push(p(s), Rel::Eq);
        }
        let pts = sample_locus(&b, &[], 6, 2, 100);
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|x| super::super::locus_contains(&b, x)));
        assert!(pts.contains(&vec![qi(0), qi(0), q(-4, 3), qi(1), qi(0), qi(0)]));
    }

    #[test]
    fn affine_and_quadratic() {
        let mut b = TreeBranch::default();
        b.push(p("x6 - 2"), Rel::Eq);
        b.push(p("x1*x6 - x2*x5"), Rel::Eq);
        b.push(p("x1"), Rel::Gt);
        for s in ["x3", "x4"] {
            b.push(p(s), Rel::Eq);
        }
        let pts = sample_locus(&b, &[], 6, 2, 1000);
        assert!(!pts.is_empty());
        assert!(pts
            .iter()
            .all(|x| super::super::locus_contains(&b, x) && x[5] == qi(2)));
        let mut none = TreeBranch::default();
        none.push(p("x1^2 + x2^2"), Rel::Eq);
        none.push(p("x1"), Rel::Ne);
        assert!(sample_locus(&none, &[], 6, 2, 10).is_empty());
    }
}
