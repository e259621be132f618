//! The (modified) classical Yang–Baxter equation: the polynomial systems of
//! `[r, r]`, solution tests, cocommutators, the quotient by invariant
//! bivectors and necessary conditions for equivalence.

pub mod golden;
pub mod variety;

use num_traits::Zero;

use crate::derivations::{derivation_basis, orbit_dim_with, wedge_power};
use crate::error::{Error, Result};
use crate::exactmath::{Poly, RatMatrix, Q};
use crate::grassmann::{ad_action, generic_rr, invariants, Blade, MultiVec, MultiVector};
use crate::liealg::{unit, LieAlgebra};

/// Polynomial form of the CYBE and mCYBE for the generic bivector.
#[derive(Clone, Debug, PartialEq)]
pub struct YbSystem {
    /// Components of `[r, r]` in the lexicographic basis of Λ³.
    pub cybe: Vec<Poly>,
    /// Components of `[r, r]` on the complement of the invariant 3-vectors.
    pub mcybe: Vec<Poly>,
    /// Basis of `(Λ³g)^g` in reduced echelon form.
    pub inv3: Vec<MultiVector>,
    /// Λ³ blades on which the mCYBE components live.
    pub mcybe_blades: Vec<Blade>,
}

/// Reduced echelon basis of a subspace given by multivectors of one degree,
/// with the pivot coordinates.
fn echelon(n: usize, m: usize, basis: &[MultiVector]) -> (Vec<Vec<Q>>, Vec<usize>) {
    let size = Blade::all(n, m).len();
    let rows: Vec<Vec<Q>> = basis.iter().map(|b| b.coords()).collect();
    let (r, piv) = RatMatrix::from_rows(&rows, size).rref();
    (r.row_vecs().into_iter().take(piv.len()).collect(), piv)
}

pub fn yb_system(g: &LieAlgebra) -> YbSystem {
    let n = g.dim();
    let rr = generic_rr(g);
    let cybe = rr.coord_polys();
    let inv = invariants(g, 3);
    let (rows, piv) = echelon(n, 3, &inv);
    // subtract the invariant part read off at the pivot coordinates
    let mut reduced = cybe.clone();
    for (row, &p) in rows.iter().zip(&piv) {
        let lead = cybe[p].clone();
        for (k, c) in row.iter().enumerate() {
            if !c.is_zero() {
                reduced[k] = &reduced[k] - &lead.scale(c);
            }
        }
    }
    let blades = Blade::all(n, 3);
    let mut mcybe = Vec::new();
    let mut mcybe_blades = Vec::new();
    for (k, p) in reduced.into_iter().enumerate() {
        if piv.contains(&k) {
            debug_assert!(p.is_zero());
            continue;
        }
        if !p.is_zero() {
            mcybe.push(p);
            mcybe_blades.push(blades[k]);
        }
    }
    let inv3 = rows
        .iter()
        .map(|r| MultiVector::from_coords(n, 3, r).expect("sizes"))
        .collect();
    YbSystem {
        cybe: cybe.into_iter().filter(|p| !p.is_zero()).collect(),
        mcybe,
        inv3,
        mcybe_blades,
    }
}

/// Bivector from coordinates `x1..xN` in the lexicographic basis of Λ².
pub fn rmatrix(dim: usize, coords: &[Q]) -> Result<MultiVector> {
    MultiVector::from_coords(dim, 2, coords)
}

fn check_r(g: &LieAlgebra, r: &MultiVector) -> Result<()> {
    if r.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: r.dim(),
        });
    }
    if r.degree() != 2 && !r.is_zero() {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: r.degree(),
        });
    }
    Ok(())
}

/// `[r, r]` evaluated directly.
pub fn rr(g: &LieAlgebra, r: &MultiVector) -> Result<MultiVector> {
    check_r(g, r)?;
    let r = if r.is_zero() {
        MultiVector::zero(g.dim(), 2)
    } else {
        r.clone()
    };
    MultiVec::schouten(g, &r, &r)
}

/// Whether `w` is annihilated by every `ad_{e_i}`.
pub fn is_invariant(g: &LieAlgebra, w: &MultiVector) -> Result<bool> {
    for i in 0..g.dim() {
        if !ad_action(g, &unit(g.dim(), i), w)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `[r, r] ∈ (Λ³g)^g`, checked on the evaluated 3-vector.
pub fn is_mcybe_solution(g: &LieAlgebra, r: &MultiVector) -> Result<bool> {
    is_invariant(g, &rr(g, r)?)
}

/// `[r, r] = 0`.
pub fn is_cybe_solution(g: &LieAlgebra, r: &MultiVector) -> Result<bool> {
    Ok(rr(g, r)?.is_zero())
}

/// `δ_r(v) = [v, r]`.
pub fn cocommutator(g: &LieAlgebra, r: &MultiVector, v: &[Q]) -> Result<MultiVector> {
    check_r(g, r)?;
    let r = if r.is_zero() {
        MultiVector::zero(g.dim(), 2)
    } else {
        r.clone()
    };
    ad_action(g, v, &r)
}

/// As [`cocommutator`], plus a warning when `r` does not solve the mCYBE
/// (the map is still defined but fails the co-Jacobi identity).
pub fn cocommutator_checked(
    g: &LieAlgebra,
    r: &MultiVector,
    v: &[Q],
) -> Result<(MultiVector, Option<String>)> {
    let d = cocommutator(g, r, v)?;
    let warn = (!is_mcybe_solution(g, r)?).then(|| format!("r = {r} does not solve the mCYBE"));
    Ok((d, warn))
}

/// Cocycle identity `δ([v1,v2]) = [v1, δ(v2)] + [δ(v1), v2]` on basis pairs;
/// returns the failing pairs.
pub fn cocycle_failures(g: &LieAlgebra, r: &MultiVector) -> Result<Vec<(usize, usize)>> {
    let n = g.dim();
    let mut bad = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let lhs = cocommutator(g, r, &g.bracket_basis(a, b))?;
            let ea = MultiVector::from_vector(&unit(n, a));
            let eb = MultiVector::from_vector(&unit(n, b));
            let d1 = cocommutator(g, r, &unit(n, a))?;
            let d2 = cocommutator(g, r, &unit(n, b))?;
            let t1 = MultiVec::schouten(g, &ea, &d2)?;
            let t2 = MultiVec::schouten(g, &d1, &eb)?;
            if lhs != t1.add(&t2)? {
                bad.push((a, b));
            }
        }
    }
    Ok(bad)
}

/// Canonical coordinates of the class of `r` in Λ²g / (Λ²g)^g: the
/// non-pivot coordinates after reducing against the echelon invariant basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientClass {
    pub blades: Vec<Blade>,
    pub coords: Vec<Q>,
}

pub fn quotient_class(g: &LieAlgebra, r: &MultiVector) -> Result<QuotientClass> {
    check_r(g, r)?;
    let n = g.dim();
    let (rows, piv) = echelon(n, 2, &invariants(g, 2));
    let mut x = if r.is_zero() {
        vec![Q::zero(); Blade::all(n, 2).len()]
    } else {
        r.coords()
    };
    for (row, &p) in rows.iter().zip(&piv) {
        let lead = x[p].clone();
        if lead.is_zero() {
            continue;
        }
        for (k, c) in row.iter().enumerate() {
            x[k] -= &lead * c;
        }
    }
    let blades = Blade::all(n, 2);
    let keep: Vec<usize> = (0..blades.len()).filter(|k| !piv.contains(k)).collect();
    Ok(QuotientClass {
        blades: keep.iter().map(|&k| blades[k]).collect(),
        coords: keep.iter().map(|&k| x[k].clone()).collect(),
    })
}

/// Checks that `t` is an invertible map preserving all basis brackets.
pub fn check_automorphism(g: &LieAlgebra, t: &RatMatrix) -> Result<()> {
    let n = g.dim();
    if t.rows() != n || t.cols() != n {
        return Err(Error::NotAnAutomorphism(format!("expected {n}x{n} matrix")));
    }
    if t.inverse().is_none() {
        return Err(Error::NotAnAutomorphism("singular matrix".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            let lhs = t.mul_vec(&g.bracket_basis(i, j));
            let rhs = g.bracket(&t.col(i), &t.col(j))?;
            if lhs != rhs {
                return Err(Error::NotAnAutomorphism(format!(
                    "T[e{},e{}] != [Te{},Te{}]",
                    i + 1,
                    j + 1,
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// `Λ²T r`.
pub fn transform(t: &RatMatrix, r: &MultiVector) -> Result<MultiVector> {
    let n = t.rows();
    let x = if r.is_zero() {
        vec![Q::zero(); Blade::all(n, 2).len()]
    } else {
        r.coords()
    };
    MultiVector::from_coords(n, 2, &wedge_power(t, 2).mul_vec(&x))
}

/// Whether `Λ²T r1` and `r2` define the same cocommutator.
pub fn same_coboundary(
    g: &LieAlgebra,
    r1: &MultiVector,
    r2: &MultiVector,
    t: &RatMatrix,
) -> Result<bool> {
    check_automorphism(g, t)?;
    Ok(quotient_class(g, &transform(t, r1)?)? == quotient_class(g, r2)?)
}

/// Outcome of the machine-checkable necessary conditions for two r-matrices
/// to lie in one Aut(g)-orbit: equal bivector rank, `[r,r]` both zero or both
/// nonzero, and equal orbit dimensions of `r` and of `[r,r]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecessaryReport {
    pub rank1: usize,
    pub rank2: usize,
    pub rr1_zero: bool,
    pub rr2_zero: bool,
    pub orbit_dim1: usize,
    pub orbit_dim2: usize,
    pub rr_orbit_dim1: usize,
    pub rr_orbit_dim2: usize,
    pub provably_inequivalent: bool,
    pub reasons: Vec<String>,
}

/// Rank of a bivector as an antisymmetric matrix.
pub fn bivector_rank(r: &MultiVector) -> usize {
    if r.is_zero() {
        return 0;
    }
    r.bivector_matrix().rank()
}

pub fn necessary_checks(
    g: &LieAlgebra,
    r1: &MultiVector,
    r2: &MultiVector,
) -> Result<NecessaryReport> {
    let ds = derivation_basis(g);
    let (rank1, rank2) = (bivector_rank(r1), bivector_rank(r2));
    let (rr1, rr2) = (rr(g, r1)?, rr(g, r2)?);
    let (rr1_zero, rr2_zero) = (rr1.is_zero(), rr2.is_zero());
    let od = |w: &MultiVector| {
        if w.is_zero() {
            0
        } else {
            orbit_dim_with(&ds, w)
        }
    };
    let (orbit_dim1, orbit_dim2) = (od(r1), od(r2));
    let (rr_orbit_dim1, rr_orbit_dim2) = (od(&rr1), od(&rr2));
    let mut reasons = Vec::new();
    if rank1 != rank2 {
        reasons.push(format!("bivector ranks differ ({rank1} vs {rank2})"));
    }
    if rr1_zero != rr2_zero {
        reasons.push("exactly one of [r1,r1], [r2,r2] vanishes".into());
    }
    if orbit_dim1 != orbit_dim2 {
        reasons.push(format!(
            "orbit dimensions differ ({orbit_dim1} vs {orbit_dim2})"
        ));
    }
    if rr_orbit_dim1 != rr_orbit_dim2 {
        reasons.push(format!(
            "orbit dimensions of [r,r] differ ({rr_orbit_dim1} vs {rr_orbit_dim2})"
        ));
    }
    Ok(NecessaryReport {
        rank1,
        rank2,
        rr1_zero,
        rr2_zero,
        orbit_dim1,
        orbit_dim2,
        rr_orbit_dim1,
        rr_orbit_dim2,
        provably_inequivalent: !reasons.is_empty(),
        reasons,
    })
}
