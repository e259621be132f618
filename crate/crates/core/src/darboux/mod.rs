//! Darboux families for Lie algebras of linear vector fields: closure
//! verification with polynomial cofactors, bricks, family sums, branch loci
//! and branch verification.

pub mod sample;
pub mod tree;

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::derivations::{field_rank_at, vf_apply, LinearVectorField};
use crate::error::{Error, Result};
use crate::exactmath::{combine, ideal_membership, rank_of, Monomial, Poly, RatMatrix, Q};
use crate::parse::Rel;

/// `⟨f_1, …, f_s⟩` closed under a list of fields: `X_k f_j = Σ_i h[k][j][i] f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxFamily {
    pub generators: Vec<Poly>,
    /// `cofactors[k][j][i]` is `h^i_{j X_k}`.
    pub cofactors: Option<Vec<Vec<Vec<Poly>>>>,
    pub linear: bool,
    pub fields: Vec<LinearVectorField>,
}

impl DarbouxFamily {
    /// Re-checks every witness exactly.
    pub fn check(&self) -> bool {
        let Some(cof) = &self.cofactors else {
            return false;
        };
        self.fields.iter().zip(cof).all(|(x, rows)| {
            self.generators.iter().zip(rows).all(|(f, h)| {
                vf_apply(x, f)
                    .map(|xf| xf == combine(h, &self.generators))
                    .unwrap_or(false)
            })
        })
    }
}

/// Coefficient vectors of `polys` over their joint monomial support.
fn coefficient_rows(polys: &[Poly]) -> (Vec<Vec<Q>>, usize) {
    let mut monos: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let n = monos.len();
            monos.entry(m.clone()).or_insert(n);
        }
    }
    let rows = polys
        .iter()
        .map(|p| {
            let mut r = vec![Q::zero(); monos.len()];
            for (m, c) in p.terms() {
                r[monos[m]] = c.clone();
            }
            r
        })
        .collect();
    (rows, monos.len())
}

/// Keeps the polynomials that enlarge the ℚ-span, in order.
pub fn independent(polys: &[Poly]) -> Vec<Poly> {
    let (rows, width) = coefficient_rows(polys);
    let mut kept = Vec::new();
    let mut acc: Vec<Vec<Q>> = Vec::new();
    for (p, r) in polys.iter().zip(rows) {
        if p.is_zero() {
            continue;
        }
        acc.push(r);
        if rank_of(&acc, width) == acc.len() {
            kept.push(p.clone());
        } else {
            acc.pop();
        }
    }
    kept
}

/// Verifies that `gens` span a Darboux family for `fields` with polynomial
/// cofactors of degree at most `bound`. Linearly dependent generators are
/// dropped first.
pub fn verify_family(
    fields: &[LinearVectorField],
    gens: &[Poly],
    bound: u32,
) -> Option<DarbouxFamily> {
    let generators = independent(gens);
    if generators.is_empty() {
        return None;
    }
    let mut cofactors = Vec::with_capacity(fields.len());
    for x in fields {
        let mut rows = Vec::with_capacity(generators.len());
        for f in &generators {
            let xf = vf_apply(x, f).ok()?;
            rows.push(ideal_membership(&xf, &generators, bound)?);
        }
        cofactors.push(rows);
    }
    let linear = cofactors.iter().flatten().flatten().all(Poly::is_constant);
    Some(DarbouxFamily {
        generators,
        cofactors: Some(cofactors),
        linear,
        fields: fields.to_vec(),
    })
}

/// `A + B`: generators are the independent union, cofactors are recombined
/// over the new generators and re-checked.
pub fn family_sum(a: &DarbouxFamily, b: &DarbouxFamily) -> Result<DarbouxFamily> {
    if a.fields != b.fields {
        return Err(Error::IncompatibleFields);
    }
    let all: Vec<Poly> = a.generators.iter().chain(&b.generators).cloned().collect();
    let generators = independent(&all);
    // express every old generator over the new ones
    let (rows, width) =
        coefficient_rows(&generators.iter().chain(&all).cloned().collect::<Vec<_>>());
    let basis = RatMatrix::from_rows(&rows[..generators.len()], width).transpose();
    let coords: Vec<Vec<Q>> = rows[generators.len()..]
        .iter()
        .map(|r| basis.solve(r).expect("old generator lies in the new span"))
        .collect();
    let (ca, cb) = match (&a.cofactors, &b.cofactors) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(Error::IncompatibleFields),
    };
    let mut cofactors = Vec::with_capacity(a.fields.len());
    for k in 0..a.fields.len() {
        let old: Vec<&Vec<Poly>> = ca[k].iter().chain(&cb[k]).collect();
        let mut out = Vec::with_capacity(generators.len());
        for g in &generators {
            // g is one of the old generators; rewrite its cofactors
            let j = all
                .iter()
                .position(|p| p == g)
                .expect("kept from the union");
            // cofactors of b's generators refer to b's own list
            let offset = if j < a.generators.len() {
                0
            } else {
                a.generators.len()
            };
            let mut h = vec![Poly::zero(); generators.len()];
            for (i, hi) in old[j].iter().enumerate() {
                for (t, c) in coords[offset + i].iter().enumerate() {
                    if !c.is_zero() {
                        h[t] = &h[t] + &hi.scale(c);
                    }
                }
            }
            out.push(h);
        }
        cofactors.push(out);
    }
    let linear = cofactors.iter().flatten().flatten().all(Poly::is_constant);
    let fam = DarbouxFamily {
        generators,
        cofactors: Some(cofactors),
        linear,
        fields: a.fields.clone(),
    };
    debug_assert!(fam.check());
    Ok(fam)
}

/// A linear one-dimensional Darboux family: `X_k f = λ_k f` for every field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Brick {
    pub poly: Poly,
    pub eigenvalues: BTreeMap<usize, Q>,
}

/// Characteristic polynomial coefficients `c_0..c_n` (`c_n = 1`) by
/// Faddeev–LeVerrier.
fn char_poly(a: &RatMatrix) -> Vec<Q> {
    let n = a.rows();
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut m = RatMatrix::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m).add(&RatMatrix::identity(n).scale(&c[n - k + 1]));
        let am = a.mul(&m);
        let tr: Q = (0..n).map(|i| am[(i, i)].clone()).sum();
        c[n - k] = -tr / Q::from_integer(k.into());
    }
    c
}

fn divisors(n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 1u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            if d * d != n {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

/// Rational eigenvalues of `a`, by the rational root test on the
/// characteristic polynomial. Coefficients too large for the test yield no
/// candidates beyond zero.
pub fn rational_eigenvalues(a: &RatMatrix) -> Vec<Q> {
    let mut c = char_poly(a);
    let mut out = Vec::new();
    while c.len() > 1 && c[0].is_zero() {
        c.remove(0);
        if !out.contains(&Q::zero()) {
            out.push(Q::zero());
        }
    }
    if c.len() <= 1 {
        return out;
    }
    let lcm = c.iter().fold(num_bigint::BigInt::one(), |l, x| {
        num_integer::Integer::lcm(&l, x.denom())
    });
    let ints: Vec<num_bigint::BigInt> = c
        .iter()
        .map(|x| (x * Q::from_integer(lcm.clone())).to_integer())
        .collect();
    let (Some(a0), Some(an)) = (
        ints[0].abs().to_u128(),
        ints[ints.len() - 1].abs().to_u128(),
    ) else {
        return out;
    };
    if a0 > 1 << 40 || an > 1 << 40 {
        return out;
    }
    let eval = |x: &Q| c.iter().rev().fold(Q::zero(), |acc, k| acc * x + k);
    for p in divisors(a0) {
        for q in divisors(an) {
            for s in [1i64, -1] {
                let x = Q::new((s * p as i64).into(), (q as i64).into());
                if !out.contains(&x) && eval(&x).is_zero() {
                    out.push(x);
                }
            }
        }
    }
    out.sort();
    out
}

/// Common eigenvectors of the transposed field matrices, as linear
/// polynomials. Each joint eigenspace contributes its kernel basis.
pub fn find_bricks(fields: &[LinearVectorField]) -> Vec<Brick> {
    let Some(n) = fields.first().map(LinearVectorField::nvars) else {
        return Vec::new();
    };
    // (stacked conditions, eigenvalues so far)
    let mut spaces: Vec<(RatMatrix, BTreeMap<usize, Q>)> =
        vec![(RatMatrix::zeros(0, n), BTreeMap::new())];
    for (k, x) in fields.iter().enumerate() {
        let at = x.matrix.transpose();
        let mut next = Vec::new();
        for (cond, eig) in &spaces {
            for lam in rational_eigenvalues(&at) {
                let shifted = at.sub(&RatMatrix::identity(n).scale(&lam));
                let stacked = cond.vstack(&shifted);
                if stacked.rank() < n {
                    let mut e = eig.clone();
                    e.insert(k, lam);
                    next.push((stacked, e));
                }
            }
        }
        spaces = next;
    }
    let mut out = Vec::new();
    for (cond, eigenvalues) in spaces {
        for v in cond.kernel_basis() {
            out.push(Brick {
                poly: Poly::linear(&v).monic(),
                eigenvalues: eigenvalues.clone(),
            });
        }
    }
    out.sort_by(|a, b| {
        a.poly
            .vars()
            .cmp(&b.poly.vars())
            .then_with(|| a.poly.to_string().cmp(&b.poly.to_string()))
    });
    out
}

/// One branch of a Darboux tree: `f = 0` for the equalities, `g ≠ 0` for the
/// inequalities, and optional sign conditions `s > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TreeBranch {
    pub label: String,
    pub equalities: Vec<Poly>,
    pub inequalities: Vec<Poly>,
    pub positive: Vec<Poly>,
}

impl TreeBranch {
    /// Adds a parsed atom `p rel 0`.
    pub fn push(&mut self, p: Poly, rel: Rel) {
        match rel {
            Rel::Eq => self.equalities.push(p),
            Rel::Ne => self.inequalities.push(p),
            Rel::Gt => self.positive.push(p),
            Rel::Lt => self.positive.push(-p),
        }
    }

    pub fn is_nosol(&self) -> bool {
        self.label == "nosol"
    }
}

pub fn locus_contains(branch: &TreeBranch, p: &[Q]) -> bool {
    let val = |f: &Poly| f.eval(p).ok();
    branch
        .equalities
        .iter()
        .all(|f| val(f).is_some_and(|v| v.is_zero()))
        && branch
            .inequalities
            .iter()
            .all(|f| val(f).is_some_and(|v| !v.is_zero()))
        && branch
            .positive
            .iter()
            .all(|f| val(f).is_some_and(|v| v.is_positive()))
}

/// Outcome of a successful [`verify_branch_with`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchReport {
    pub label: String,
    pub rank: usize,
    pub samples: usize,
    /// Generators of the verified family (equalities plus the mCYBE system).
    pub generators: usize,
    pub linear: bool,
    pub flow_checks: usize,
}

/// Order of the truncated exponential used for flow invariance.
pub const FLOW_ORDER: u32 = 8;

/// Checks that `f_j(p(t)) = O(t^{K+1})` along `p(t) = Σ_{k≤K} t^k A^k p / k!`
/// for every field and generator.
pub fn flow_invariant(family: &DarbouxFamily, p: &[Q], order: u32) -> bool {
    let n = p.len();
    for x in &family.fields {
        // coordinates of p(t) as polynomials in t (variable 0)
        let mut comps = vec![Poly::zero(); n];
        let mut v = p.to_vec();
        let mut fact = Q::one();
        for k in 0..=order {
            if k > 0 {
                v = x.at(&v);
                fact *= Q::from_integer(k.into());
            }
            let tk = Monomial::new(vec![k]);
            for (a, c) in v.iter().enumerate() {
                if !c.is_zero() {
                    comps[a].add_term(c / &fact, tk.clone());
                }
            }
        }
        for f in &family.generators {
            let Ok(ft) = f.substitute(&comps) else {
                return false;
            };
            if !ft.truncate(order).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Verifies a branch against explicit fields and an mCYBE system:
/// (a) equalities plus `mcybe` form a Darboux family (cofactor degree ≤ 2),
/// (b) the field rank is the same at every sample and equals `expected`
/// when given, (c) every sample lies in the locus and solves the mCYBE.
/// Flow invariance to [`FLOW_ORDER`] is checked at every sample.
pub fn verify_branch_with(
    fields: &[LinearVectorField],
    mcybe: &[Poly],
    branch: &TreeBranch,
    samples: &[Vec<Q>],
    expected: Option<usize>,
) -> Result<BranchReport> {
    let invalid = |reason: String| Error::BranchInvalid {
        label: branch.label.clone(),
        reason,
    };
    let solves = |p: &[Q]| mcybe.iter().all(|f| f.eval(p).is_ok_and(|v| v.is_zero()));
    let good: Vec<&Vec<Q>> = samples.iter().filter(|p| solves(p)).collect();
    if good.is_empty() {
        return Err(invalid("no mCYBE points".into()));
    }
    if good.len() != samples.len() {
        return Err(invalid("a sample does not solve the mCYBE".into()));
    }
    if let Some(p) = samples.iter().find(|p| !locus_contains(branch, p)) {
        return Err(invalid(format!(
            "sample {} is outside the locus",
            fmt_point(p)
        )));
    }
    let gens: Vec<Poly> = branch.equalities.iter().chain(mcybe).cloned().collect();
    let family = verify_family(fields, &gens, 2)
        .ok_or_else(|| invalid("equalities and mCYBE do not form a Darboux family".into()))?;
    let rank = field_rank_at(fields, &samples[0]);
    for p in samples {
        let r = field_rank_at(fields, p);
        if r != rank {
            return Err(invalid(format!(
                "rank {r} at {} differs from rank {rank} at {}",
                fmt_point(p),
                fmt_point(&samples[0])
            )));
        }
    }
    if let Some(d) = expected {
        if d != rank {
            return Err(invalid(format!(
                "rank {rank} but the stated dimension is {d}"
            )));
        }
    }
    for p in samples {
        if !flow_invariant(&family, p, FLOW_ORDER) {
            return Err(invalid(format!(
                "flow leaves the locus at {}",
                fmt_point(p)
            )));
        }
    }
    Ok(BranchReport {
        label: branch.label.clone(),
        rank,
        samples: samples.len(),
        generators: family.generators.len(),
        linear: family.linear,
        flow_checks: samples.len() * fields.len(),
    })
}

/// [`verify_branch_with`] for the fundamental fields and mCYBE system of `g`.
pub fn verify_branch(
    g: &crate::LieAlgebra,
    branch: &TreeBranch,
    samples: &[Vec<Q>],
) -> Result<BranchReport> {
    let fields = crate::derivations::fundamental_fields(g, 2);
    let mcybe = crate::yangbaxter::yb_system(g).mcybe;
    verify_branch_with(&fields, &mcybe, branch, samples, None)
}

pub fn fmt_point(p: &[Q]) -> String {
    let parts: Vec<String> = p.iter().map(crate::exactmath::fmt_q).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivations::fundamental_fields;
    use crate::exactmath::{q, qi};
    use crate::liealg::catalog::{catalog, CatalogId, Family};
    use crate::parse::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s, &|_| None).unwrap()
    }

    fn alg(f: Family) -> crate::LieAlgebra {
        catalog(&CatalogId::new(f, f.samples().remove(0))).unwrap()
    }

    fn fields(f: Family) -> Vec<LinearVectorField> {
        fundamental_fields(&alg(f), 2)
    }

    #[test]
    fn s1_families() {
        let xs = fields(Family::S1);
        let mcybe = crate::yangbaxter::yb_system(&alg(Family::S1)).mcybe;
        let m = verify_family(&xs, &mcybe, 0).unwrap();
        assert!(m.linear && m.check());
        assert!(verify_family(&xs, &[p("x1")], 2).is_none());
        let all: Vec<Poly> = (0..6).map(Poly::var).collect();
        assert!(verify_family(&xs, &all, 0).unwrap().linear);
    }

    #[test]
    fn sums() {
        let xs = fields(Family::S1);
        let a = verify_family(&xs, &[p("x5")], 0).unwrap();
        let b = verify_family(&xs, &[p("x6")], 0).unwrap();
        let s = family_sum(&a, &b).unwrap();
        assert_eq!(s.generators, vec![p("x5"), p("x6")]);
        assert!(s.check());
        assert_eq!(family_sum(&a, &a).unwrap().generators, a.generators);
        let mcybe = crate::yangbaxter::yb_system(&alg(Family::S1)).mcybe;
        let m = verify_family(&xs, &mcybe, 0).unwrap();
        let sm = family_sum(&m, &b).unwrap();
        assert_eq!(sm.generators.len(), m.generators.len() + 1);
        assert!(sm.check());
        let other = verify_family(&fields(Family::S2), &[p("x6")], 0).unwrap();
        assert_eq!(family_sum(&a, &other), Err(Error::IncompatibleFields));
    }

    #[test]
    fn stated_bricks() {
        let polys = |f| {
            find_bricks(&fields(f))
                .into_iter()
                .map(|b| b.poly)
                .collect::<Vec<_>>()
        };
        assert_eq!(polys(Family::S1), vec![p("x5"), p("x6")]);
        assert_eq!(polys(Family::S5), vec![p("x3")]);
        assert_eq!(polys(Family::S6), vec![p("x5"), p("x6")]);
        for f in [Family::S1, Family::S6] {
            let xs = fields(f);
            for b in find_bricks(&xs) {
                assert!(
                    verify_family(&xs, std::slice::from_ref(&b.poly), 0)
                        .unwrap()
                        .linear
                );
            }
        }
    }

    #[test]
    fn eigenvalues() {
        let a = RatMatrix::diag(&[qi(2), q(1, 2), qi(2), qi(0)]);
        assert_eq!(rational_eigenvalues(&a), vec![qi(0), q(1, 2), qi(2)]);
    }

    #[test]
    fn loci_and_branches() {
        let g = catalog(&CatalogId::plain(Family::S1)).unwrap();
        let mut viii = TreeBranch {
            label: "VIII".into(),
            ..Default::default()
        };
        viii.push(p("x5"), Rel::Eq);
        viii.push(p("x3"), Rel::Eq);
        viii.push(p("x6"), Rel::Ne);
        viii.push(p("x1"), Rel::Ne);
        let pt = |v: [i64; 6]| v.iter().map(|&x| qi(x)).collect::<Vec<Q>>();
        assert!(locus_contains(&viii, &pt([1, 0, 0, 0, 0, 1])));
        let mut ip = TreeBranch {
            label: "I+".into(),
            ..Default::default()
        };
        ip.push(p("x1"), Rel::Gt);
        assert!(!locus_contains(&ip, &pt([0, 1, 0, 0, 0, 0])));
        assert!(!locus_contains(&viii, &pt([0; 6])));

        let mut i = TreeBranch {
            label: "I".into(),
            ..Default::default()
        };
        for s in ["x5", "x6", "x3", "x4", "x2"] {
            i.push(p(s), Rel::Eq);
        }
        i.push(p("x1"), Rel::Ne);
        assert_eq!(
            verify_branch(&g, &i, &[pt([1, 0, 0, 0, 0, 0])])
                .unwrap()
                .rank,
            1
        );
        let mut vii = TreeBranch {
            label: "VII".into(),
            ..Default::default()
        };
        for s in ["x5", "x3", "x1"] {
            vii.push(p(s), Rel::Eq);
        }
        vii.push(p("x6"), Rel::Ne);
        assert_eq!(
            verify_branch(&g, &vii, &[pt([0, 0, 0, 0, 0, 1])])
                .unwrap()
                .rank,
            3
        );
        let mut none = TreeBranch {
            label: "nosol".into(),
            ..Default::default()
        };
        none.push(p("x5"), Rel::Ne);
        match verify_branch(&g, &none, &[pt([0, 0, 0, 0, 1, 0])]) {
            Err(Error::BranchInvalid { reason, .. }) => assert_eq!(reason, "no mCYBE points"),
            other => panic!("{other:?}"),
        }
    }
}
