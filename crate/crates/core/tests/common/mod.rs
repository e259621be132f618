//! Property checks shared by the proptest suites and the acceptance run.
//!
//! Every check takes plain inputs and returns `Err` with a description on
//! failure. Oracles are written against the bracket and the wedge product
//! only, so they do not reuse the Schouten engine they test.

#![allow(dead_code)]

use std::sync::OnceLock;

use darbouxlie::derivations::{derivation_basis, in_span, lift, Derivation};
use darbouxlie::exactmath::{combine, ideal_membership, rank_of};
use darbouxlie::grassmann::{ad_action, invariants};
use darbouxlie::liealg::catalog::all_samples;
use darbouxlie::liealg::unit;
use darbouxlie::yangbaxter::{
    bivector_rank, cocommutator, is_mcybe_solution, quotient_class, yb_system, YbSystem,
};
use darbouxlie::{catalog, CatalogId, LieAlgebra, MultiVector, Poly, RatMatrix, Q};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Check = Result<(), String>;

/// A catalog instance with its derivations and Yang–Baxter system.
pub struct Instance {
    pub id: CatalogId,
    pub g: LieAlgebra,
    pub ders: Vec<Derivation>,
    pub system: YbSystem,
}

pub fn instances() -> &'static [Instance] {
    static CELL: OnceLock<Vec<Instance>> = OnceLock::new();
    CELL.get_or_init(|| {
        all_samples()
            .into_iter()
            .map(|id| {
                let g = catalog(&id).expect("catalog sample");
                let ders = derivation_basis(&g);
                let system = yb_system(&g);
                Instance {
                    id,
                    g,
                    ders,
                    system,
                }
            })
            .collect()
    })
}

fn fail(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn neg(v: &[Q]) -> Vec<Q> {
    v.iter().map(|x| -x).collect()
}

fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Equality that ignores the degree tag of zero multivectors.
pub fn same(a: &MultiVector, b: &MultiVector) -> bool {
    (a.is_zero() && b.is_zero()) || a == b
}

fn sum(a: &MultiVector, b: &MultiVector) -> MultiVector {
    a.add(b).expect("same dimension and degree")
}

// exactmath

pub fn rref_props(m: &RatMatrix) -> Check {
    let (r, piv) = m.rref();
    fail(r.rref() == (r.clone(), piv.clone()), || {
        format!("rref not idempotent on\n{m}")
    })?;
    fail(r.rank() == m.rank() && piv.len() == m.rank(), || {
        format!("rank changed on\n{m}")
    })?;
    let stacked = m.vstack(&r);
    fail(stacked.rank() == m.rank(), || {
        format!("row space changed on\n{m}")
    })?;
    for (row, &p) in piv.iter().enumerate() {
        for i in 0..r.rows() {
            let want = if i == row { Q::one() } else { Q::zero() };
            fail(r[(i, p)] == want, || {
                format!("pivot column {p} not a unit vector in\n{r}")
            })?;
        }
        fail((0..p).all(|j| r[(row, j)].is_zero()), || {
            format!("entries left of pivot in\n{r}")
        })?;
    }
    let k = m.kernel_basis();
    fail(k.len() == m.cols() - m.rank(), || {
        format!("kernel size {} on\n{m}", k.len())
    })?;
    fail(rank_of(&k, m.cols()) == k.len(), || {
        "kernel vectors dependent".into()
    })?;
    for v in &k {
        fail(m.mul_vec(v).iter().all(Zero::is_zero), || {
            format!("m·v != 0 on\n{m}")
        })?;
    }
    Ok(())
}

#[allow(clippy::eq_op)]
pub fn poly_ring(p: &Poly, q: &Poly, r: &Poly) -> Check {
    fail(&(p + q) * r == &(p * r) + &(q * r), || {
        format!("distributivity fails for {p}, {q}, {r}")
    })?;
    fail((p - p).is_empty(), || format!("p - p not empty for {p}"))?;
    fail(p * q == q * p, || {
        format!("commutativity fails for {p}, {q}")
    })?;
    fail(&(p * q) * r == p * &(q * r), || {
        format!("associativity fails for {p}, {q}, {r}")
    })?;
    fail(p + &Poly::zero() == *p && p * &Poly::one() == *p, || {
        format!("units fail for {p}")
    })
}

/// `target = Σ cofs_i gens_i` must be found again and recombine exactly.
pub fn ideal_roundtrip(gens: &[Poly], cofs: &[Poly]) -> Check {
    let target = combine(cofs, gens);
    let bound = cofs.iter().filter_map(Poly::degree).max().unwrap_or(0);
    let found = ideal_membership(&target, gens, bound)
        .ok_or_else(|| format!("{target} not found in the ideal of {gens:?} at bound {bound}"))?;
    fail(
        found.iter().all(|h| h.degree().unwrap_or(0) <= bound),
        || "cofactor degree above bound".into(),
    )?;
    fail(combine(&found, gens) == target, || {
        format!("cofactors do not recombine to {target}")
    })
}

// liealg

pub fn jacobi(g: &LieAlgebra, u: &[Q], v: &[Q], w: &[Q]) -> Check {
    let b = |x: &[Q], y: &[Q]| g.bracket(x, y).expect("dim");
    let total = add(&add(&b(u, &b(v, w)), &b(v, &b(w, u))), &b(w, &b(u, v)));
    fail(total.iter().all(Zero::is_zero), || {
        format!("Jacobi fails in {}", g.name)
    })?;
    fail(b(u, v) == neg(&b(v, u)), || {
        format!("antisymmetry fails in {}", g.name)
    })
}

pub fn center_commutes(g: &LieAlgebra) -> Check {
    let n = g.dim();
    for z in g.center() {
        for i in 0..n {
            let c = g.bracket(&z, &unit(n, i)).expect("dim");
            fail(c.iter().all(Zero::is_zero), || {
                format!("center vector of {} does not commute", g.name)
            })?;
        }
    }
    Ok(())
}

// grassmann

fn sign(e: usize) -> Q {
    if e.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

pub fn schouten_symmetry(g: &LieAlgebra, a: &MultiVector, b: &MultiVector) -> Check {
    let (s, l) = (a.degree(), b.degree());
    let ab = MultiVector::schouten(g, a, b).map_err(|e| e.to_string())?;
    let ba = MultiVector::schouten(g, b, a).map_err(|e| e.to_string())?;
    let rhs = ba.scale(&-sign((s - 1) * (l - 1)));
    fail(same(&ab, &rhs), || {
        format!("graded symmetry fails in {} for {a} and {b}", g.name)
    })
}

pub fn schouten_leibniz(
    g: &LieAlgebra,
    a: &MultiVector,
    b: &MultiVector,
    c: &MultiVector,
) -> Check {
    let (s, l) = (a.degree(), b.degree());
    let sch = |x: &MultiVector, y: &MultiVector| MultiVector::schouten(g, x, y).expect("dim");
    let lhs = sch(a, &b.wedge(c).expect("dim"));
    let t1 = sch(a, b).wedge(c).expect("dim");
    let t2 = b.wedge(&sch(a, c)).expect("dim").scale(&sign((s - 1) * l));
    fail(same(&lhs, &sum(&t1, &t2)), || {
        format!("graded Leibniz fails in {} for {a}, {b}, {c}", g.name)
    })
}

pub fn schouten_degree_one(g: &LieAlgebra, u: &[Q], v: &[Q]) -> Check {
    let lhs = MultiVector::schouten(
        g,
        &MultiVector::from_vector(u),
        &MultiVector::from_vector(v),
    )
    .map_err(|e| e.to_string())?;
    let rhs = MultiVector::from_vector(&g.bracket(u, v).expect("dim"));
    fail(same(&lhs, &rhs), || {
        format!("degree-one Schouten differs from the bracket in {}", g.name)
    })
}

/// `ad_v` on a bivector through the bracket and the wedge only:
/// `ad_v(x ∧ y) = [v,x] ∧ y + x ∧ [v,y]`.
pub fn ad_bivector(g: &LieAlgebra, v: &[Q], r: &MultiVector) -> MultiVector {
    let n = g.dim();
    let mut out = MultiVector::zero(n, 2);
    for (b, c) in r.terms() {
        let ix = b.indices();
        let (x, y) = (unit(n, ix[0]), unit(n, ix[1]));
        let vx = MultiVector::from_vector(&g.bracket(v, &x).expect("dim"));
        let vy = MultiVector::from_vector(&g.bracket(v, &y).expect("dim"));
        let (mx, my) = (MultiVector::from_vector(&x), MultiVector::from_vector(&y));
        let term = sum(&vx.wedge(&my).expect("dim"), &mx.wedge(&vy).expect("dim"));
        out = sum(&out, &term.scale(c));
    }
    out
}

pub fn ad_leibniz(g: &LieAlgebra, v: &[Q], p: &MultiVector, q: &MultiVector) -> Check {
    let ad = |w: &MultiVector| ad_action(g, v, w).expect("dim");
    let lhs = ad(&p.wedge(q).expect("dim"));
    let rhs = sum(
        &ad(p).wedge(q).expect("dim"),
        &p.wedge(&ad(q)).expect("dim"),
    );
    fail(same(&lhs, &rhs), || {
        format!("ad Leibniz fails in {}", g.name)
    })
}

pub fn invariants_annihilated(g: &LieAlgebra) -> Check {
    let n = g.dim();
    for m in 0..=n {
        for w in invariants(g, m) {
            for i in 0..n {
                let a = ad_action(g, &unit(n, i), &w).map_err(|e| e.to_string())?;
                fail(a.is_zero(), || {
                    format!("invariant {w} of {} moved by e{}", g.name, i + 1)
                })?;
            }
        }
    }
    Ok(())
}

// derivations

pub fn combination(ds: &[Derivation], c: &[Q]) -> Derivation {
    let n = ds[0].matrix.rows();
    let m = ds
        .iter()
        .zip(c)
        .fold(RatMatrix::zeros(n, n), |acc, (d, x)| {
            acc.add(&d.matrix.scale(x))
        });
    Derivation { matrix: m }
}

pub fn derivation_closure(g: &LieAlgebra, ds: &[Derivation], c1: &[Q], c2: &[Q]) -> Check {
    let (d1, d2) = (combination(ds, c1), combination(ds, c2));
    fail(d1.leibniz_failures(g).is_empty(), || {
        format!("combination is not a derivation of {}", g.name)
    })?;
    let br = Derivation {
        matrix: d1.matrix.commutator(&d2.matrix),
    };
    fail(br.leibniz_failures(g).is_empty(), || {
        format!("commutator breaks Leibniz in {}", g.name)
    })?;
    fail(in_span(ds, &br), || {
        format!("commutator leaves der({})", g.name)
    })
}

pub fn inner_in_span(g: &LieAlgebra, ds: &[Derivation], v: &[Q]) -> Check {
    fail(in_span(ds, &Derivation { matrix: g.ad(v) }), || {
        format!("inner derivation outside der({})", g.name)
    })
}

pub fn lift_leibniz(d: &Derivation, u: &[Q], w: &[Q]) -> Check {
    let (mu, mw) = (MultiVector::from_vector(u), MultiVector::from_vector(w));
    let uw = mu.wedge(&mw).expect("dim");
    let lhs = lift(d, 2).matrix.mul_vec(&uw.coords());
    let du = MultiVector::from_vector(&d.apply(u));
    let dw = MultiVector::from_vector(&d.apply(w));
    let rhs = sum(&du.wedge(&mw).expect("dim"), &mu.wedge(&dw).expect("dim"));
    fail(lhs == rhs.coords(), || {
        "lifted derivation breaks Leibniz".into()
    })
}

// yangbaxter

/// Cocycle identity `δ([v1,v2]) = ad_{v1} δ(v2) − ad_{v2} δ(v1)` with
/// `δ = ad_·(r)`, checked against the library cocommutator as well.
pub fn cocycle(g: &LieAlgebra, r: &MultiVector, v1: &[Q], v2: &[Q]) -> Check {
    let delta = |v: &[Q]| ad_bivector(g, v, r);
    let lib = cocommutator(g, r, v1).map_err(|e| e.to_string())?;
    fail(same(&lib, &delta(v1)), || {
        format!(
            "cocommutator differs from the oracle in {} at r = {r}",
            g.name
        )
    })?;
    let lhs = delta(&g.bracket(v1, v2).expect("dim"));
    let rhs = sum(
        &ad_bivector(g, v1, &delta(v2)),
        &ad_bivector(g, v2, &delta(v1)).scale(&-Q::one()),
    );
    fail(same(&lhs, &rhs), || {
        format!("cocycle identity fails in {} at r = {r}", g.name)
    })
}

/// Both mCYBE routes agree: direct invariance of `[r,r]` and vanishing of
/// the polynomial system.
pub fn mcybe_consistency(inst: &Instance, r: &MultiVector) -> Check {
    let direct = is_mcybe_solution(&inst.g, r).map_err(|e| e.to_string())?;
    let x = r.coords();
    let poly = inst
        .system
        .mcybe
        .iter()
        .all(|f| f.eval(&x).is_ok_and(|v| v.is_zero()));
    fail(direct == poly, || {
        format!(
            "mCYBE routes disagree in {} at r = {r}: {direct} vs {poly}",
            inst.id
        )
    })
}

pub fn quotient_shift(g: &LieAlgebra, r: &MultiVector, c: &[Q]) -> Check {
    let inv = invariants(g, 2);
    let shift = inv
        .iter()
        .zip(c)
        .fold(MultiVector::zero(g.dim(), 2), |acc, (w, x)| {
            sum(&acc, &w.scale(x))
        });
    let shifted = sum(r, &shift);
    let (a, b) = (quotient_class(g, r), quotient_class(g, &shifted));
    fail(a.is_ok() && a == b, || {
        format!("invariant shift changes the class in {}", g.name)
    })
}

pub fn rank_even(r: &MultiVector) -> Check {
    fail(bivector_rank(r).is_multiple_of(2), || {
        format!("odd rank for {r}")
    })
}

// random inputs for the acceptance run

pub struct Gen(pub ChaCha8Rng);

impl Gen {
    pub fn new(seed: u64) -> Self {
        use rand::SeedableRng;
        Gen(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn q(&mut self) -> Q {
        let n: i64 = self.0.gen_range(-6..=6);
        let d: i64 = self.0.gen_range(1..=4);
        Q::new(n.into(), d.into())
    }

    pub fn vec(&mut self, n: usize) -> Vec<Q> {
        (0..n).map(|_| self.q()).collect()
    }

    pub fn sparse_vec(&mut self, n: usize) -> Vec<Q> {
        (0..n)
            .map(|_| {
                if self.0.gen_bool(0.4) {
                    Q::zero()
                } else {
                    self.q()
                }
            })
            .collect()
    }

    pub fn mv(&mut self, dim: usize, degree: usize) -> MultiVector {
        let len = darbouxlie::Blade::all(dim, degree).len();
        let x = self.sparse_vec(len);
        MultiVector::from_coords(dim, degree, &x).expect("sizes")
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> RatMatrix {
        let rank_one = self.0.gen_bool(0.3);
        let base: Vec<Vec<Q>> = (0..rows).map(|_| self.sparse_vec(cols)).collect();
        if rank_one && rows > 1 {
            let mut rows_v = base.clone();
            let c = self.q();
            rows_v[rows - 1] = base[0].iter().map(|x| x * &c).collect();
            return RatMatrix::from_rows(&rows_v, cols);
        }
        RatMatrix::from_rows(&base, cols)
    }

    pub fn poly(&mut self, nvars: usize, max_deg: u32, terms: usize) -> Poly {
        let mut p = Poly::zero();
        for _ in 0..terms {
            let exps: Vec<u32> = (0..nvars).map(|_| 0).collect();
            let mut exps = exps;
            let d = self.0.gen_range(0..=max_deg);
            for _ in 0..d {
                exps[self.0.gen_range(0..nvars)] += 1;
            }
            p.add_term(self.q(), darbouxlie::Monomial::new(exps));
        }
        p
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.0.gen_range(0..n)
    }
}
