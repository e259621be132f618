//! Exterior algebra Λg over bitmask blades, the algebraic Schouten bracket,
//! the adjoint action on Λ^m g and invariant subspaces.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{fmt_q, Poly, RatMatrix, Q};
use crate::liealg::{LieAlgebra, MAX_DIM};
use crate::parse::Expr;

pub mod golden;

/// A basis blade `e_{i1…im}` stored as a bitmask (bit `i` ↔ `e_{i+1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Blade(pub u8);

impl Blade {
    pub fn from_indices(ix: &[usize]) -> Blade {
        Blade(ix.iter().fold(0u8, |b, &i| b | (1 << i)))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Sorted 0-based indices.
    pub fn indices(self) -> Vec<usize> {
        (0..8).filter(|i| self.0 & (1 << i) != 0).collect()
    }

    /// `e12`, `e134`; `1` for the empty blade.
    pub fn name(self) -> String {
        if self.0 == 0 {
            return "1".into();
        }
        let ix: String = self.indices().iter().map(|i| (i + 1).to_string()).collect();
        format!("e{ix}")
    }

    /// Sign and blade of `self ∧ other`, `None` if they share an index.
    pub fn wedge(self, other: Blade) -> Option<(bool, Blade)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // count pairs i ∈ self, j ∈ other with i > j
        let mut swaps = 0u32;
        for j in other.indices() {
            swaps += (self.0 >> (j + 1)).count_ones();
        }
        Some((swaps % 2 == 1, Blade(self.0 | other.0)))
    }

    /// All blades of degree `m` in dimension `n`, lexicographic by index tuple.
    pub fn all(n: usize, m: usize) -> Vec<Blade> {
        fn rec(start: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Blade>) {
            if left == 0 {
                out.push(Blade::from_indices(cur));
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if m <= n {
            rec(0, n, m, &mut Vec::new(), &mut out);
        }
        out
    }

    /// Position of `self` in [`Blade::all`]`(n, degree)`.
    pub fn position(self, n: usize) -> usize {
        Blade::all(n, self.degree())
            .iter()
            .position(|b| *b == self)
            .expect("blade within dim")
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.indices().cmp(&other.indices()))
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coefficient ring for multivectors: ℚ or ℚ[x1..xN].
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, q: &Q) -> Self;
}

impl Coeff for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, q: &Q) -> Self {
        self * q
    }
}

impl Coeff for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self = &*self + other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, q: &Q) -> Self {
        Poly::scale(self, q)
    }
}

/// Homogeneous element of Λ^m g.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiVec<C> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Blade, C>,
}

/// Multivector with rational coefficients.
pub type MultiVector = MultiVec<Q>;
/// Multivector with polynomial coefficients, e.g. the generic bivector.
pub type SymMultiVector = MultiVec<Poly>;

impl<C: Coeff> MultiVec<C> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension above {MAX_DIM}");
        MultiVec {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn blade(dim: usize, b: Blade, c: C) -> Self {
        let mut v = MultiVec::zero(dim, b.degree());
        v.add_term(b, c);
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic blade order.
    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: Blade) -> C {
        self.terms.get(&b).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, b: Blade, c: C) {
        assert_eq!(b.degree(), self.degree, "blade degree");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(x) => {
                x.add_assign(&c);
                if x.is_zero() {
                    self.terms.remove(&b);
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        let mut out = if self.is_zero() {
            MultiVec::zero(self.dim, other.degree)
        } else {
            self.clone()
        };
        if self.is_zero() {
            out.degree = other.degree;
        }
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, q: &Q) -> Self {
        let mut out = MultiVec::zero(self.dim, self.degree);
        for (b, c) in &self.terms {
            out.add_term(*b, c.scale(q));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = MultiVec::zero(self.dim, self.degree + other.degree);
        if self.degree + other.degree > self.dim {
            return Ok(out);
        }
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((neg, ab)) = a.wedge(*b) {
                    let c = ca.mul(cb);
                    out.add_term(ab, if neg { c.scale(&-Q::one()) } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Algebraic Schouten bracket on decomposable blades:
    /// `[X1…Xs, Y1…Yl] = Σ (-1)^{i+j} [Xi,Yj] ∧ X1…X̂i…Xs ∧ Y1…Ŷj…Yl`.
    pub fn schouten(g: &LieAlgebra, a: &Self, b: &Self) -> Result<Self> {
        a.check(b)?;
        if a.dim != g.dim() {
            return Err(Error::DimensionMismatch {
                expected: g.dim(),
                got: a.dim,
            });
        }
        let (s, l) = (a.degree, b.degree);
        if s == 0 || l == 0 {
            return Ok(MultiVec::zero(a.dim, (s + l).saturating_sub(1)));
        }
        let n = a.dim;
        let mut out = MultiVec::zero(n, s + l - 1);
        for (ba, ca) in &a.terms {
            let xa = ba.indices();
            for (bb, cb) in &b.terms {
                let yb = bb.indices();
                let coeff = ca.mul(cb);
                for (pi, &i) in xa.iter().enumerate() {
                    let rest_a = Blade(ba.0 & !(1 << i));
                    for (pj, &j) in yb.iter().enumerate() {
                        if i == j {
                            continue;
                        }
                        let rest_b = Blade(bb.0 & !(1 << j));
                        let Some((s1, tail)) = rest_a.wedge(rest_b) else {
                            continue;
                        };
                        let neg0 = (pi + pj) % 2 == 1;
                        for k in 0..n {
                            let c = g.c(i, j, k);
                            if Zero::is_zero(c) {
                                continue;
                            }
                            let Some((s2, full)) = Blade(1 << k).wedge(tail) else {
                                continue;
                            };
                            let neg = neg0 ^ s1 ^ s2;
                            let c = if neg { -c.clone() } else { c.clone() };
                            out.add_term(full, coeff.scale(&c));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

impl MultiVector {
    /// Degree-one multivector from a vector of `g`.
    pub fn from_vector(v: &[Q]) -> Self {
        let mut out = MultiVec::zero(v.len(), 1);
        for (i, c) in v.iter().enumerate() {
            out.add_term(Blade(1 << i), c.clone());
        }
        out
    }

    pub fn to_vector(&self) -> Vec<Q> {
        (0..self.dim).map(|i| self.coeff(Blade(1 << i))).collect()
    }

    /// Coordinates in the lexicographic blade basis of Λ^m.
    pub fn coords(&self) -> Vec<Q> {
        Blade::all(self.dim, self.degree)
            .into_iter()
            .map(|b| self.coeff(b))
            .collect()
    }

    pub fn from_coords(dim: usize, degree: usize, x: &[Q]) -> Result<Self> {
        let blades = Blade::all(dim, degree);
        if x.len() != blades.len() {
            return Err(Error::DimensionMismatch {
                expected: blades.len(),
                got: x.len(),
            });
        }
        let mut out = MultiVec::zero(dim, degree);
        for (b, c) in blades.into_iter().zip(x) {
            out.add_term(b, c.clone());
        }
        Ok(out)
    }

    /// Lifts to polynomial coefficients.
    pub fn to_sym(&self) -> SymMultiVector {
        let mut out = MultiVec::zero(self.dim, self.degree);
        for (b, c) in &self.terms {
            out.add_term(*b, Poly::constant(c.clone()));
        }
        out
    }

    /// Parses `e14 - 2*e23` with parameters bound to constants. Blade names
    /// must list distinct indices; unsorted names carry the permutation sign.
    pub fn parse(dim: usize, s: &str, params: &dyn Fn(&str) -> Option<Q>) -> Result<Self> {
        let e = Expr::parse(s)?;
        let mut degree = None;
        let p = e.eval(&|sym| {
            if let Some((neg, b)) = parse_blade(sym, dim) {
                let v = Poly::var(b.0 as usize);
                return Some(if neg { -v } else { v });
            }
            params(sym).map(Poly::constant)
        })?;
        let mut out = MultiVec::zero(dim, 0);
        for (m, c) in p.terms() {
            if m.degree() == 0 && m.exps().is_empty() {
                // a bare constant is a degree-0 multivector
                degree.get_or_insert(0usize);
                if degree != Some(0) {
                    return Err(Error::parse(0, format!("mixed degrees in {s:?}")));
                }
                out.add_term(Blade(0), c.clone());
                continue;
            }
            if m.degree() != 1 {
                return Err(Error::parse(0, format!("not linear in blades: {s:?}")));
            }
            let b = Blade((m.exps().len() - 1) as u8);
            if *degree.get_or_insert(b.degree()) != b.degree() {
                return Err(Error::parse(0, format!("mixed degrees in {s:?}")));
            }
            out.degree = b.degree();
            out.add_term(b, c.clone());
        }
        if let Some(d) = degree {
            out.degree = d;
        }
        Ok(out)
    }

    /// Antisymmetric matrix of a bivector, `M[i][j]` = coefficient of `e_i ∧ e_j`.
    pub fn bivector_matrix(&self) -> RatMatrix {
        let n = self.dim;
        let mut m = RatMatrix::zeros(n, n);
        for (b, c) in &self.terms {
            if let [i, j] = b.indices()[..] {
                m[(i, j)] = c.clone();
                m[(j, i)] = -c.clone();
            }
        }
        m
    }

    /// Evaluation of a symbolic multivector at a point.
    pub fn eval(sym: &SymMultiVector, point: &[Q]) -> Result<Self> {
        let mut out = MultiVec::zero(sym.dim, sym.degree);
        for (b, c) in &sym.terms {
            out.add_term(*b, c.eval(point)?);
        }
        Ok(out)
    }
}

/// `e124` → blade, with `true` when the written order is an odd permutation.
pub fn parse_blade(sym: &str, dim: usize) -> Option<(bool, Blade)> {
    let digits = sym.strip_prefix('e')?;
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let ix: Vec<usize> = digits
        .chars()
        .map(|c| c.to_digit(10).unwrap() as usize)
        .collect();
    let mut bits = 0u8;
    let mut inversions = 0;
    for (p, &i) in ix.iter().enumerate() {
        if i == 0 || i > dim || bits & (1 << (i - 1)) != 0 {
            return None;
        }
        bits |= 1 << (i - 1);
        inversions += ix[..p].iter().filter(|&&j| j > i).count();
    }
    Some((inversions % 2 == 1, Blade(bits)))
}

impl SymMultiVector {
    /// `r = Σ_a x_{a+1} e_{blade a}` over the lexicographic basis of Λ².
    pub fn generic(dim: usize, degree: usize) -> Self {
        let mut out = MultiVec::zero(dim, degree);
        for (a, b) in Blade::all(dim, degree).into_iter().enumerate() {
            out.add_term(b, Poly::var(a));
        }
        out
    }

    /// Coefficient polynomials in lexicographic blade order.
    pub fn coord_polys(&self) -> Vec<Poly> {
        Blade::all(self.dim, self.degree)
            .into_iter()
            .map(|b| self.coeff(b))
            .collect()
    }
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            let neg = c < &<Q as Zero>::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if b.0 == 0 {
                f.write_str(&fmt_q(&a))?;
            } else if a.is_one() {
                f.write_str(&b.name())?;
            } else {
                write!(f, "{}*{}", fmt_q(&a), b.name())?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for SymMultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| format!("({c})*{}", b.name()))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `ad_v(w) = [v, w]`.
pub fn ad_action(g: &LieAlgebra, v: &[Q], w: &MultiVector) -> Result<MultiVector> {
    if v.len() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: v.len(),
        });
    }
    MultiVec::schouten(g, &MultiVector::from_vector(v), w)
}

/// Matrix of `ad_{e_i}` on Λ^m g in lexicographic blade coordinates.
pub fn ad_matrix(g: &LieAlgebra, i: usize, m: usize) -> RatMatrix {
    let n = g.dim();
    let blades = Blade::all(n, m);
    let pos: BTreeMap<Blade, usize> = blades.iter().enumerate().map(|(k, b)| (*b, k)).collect();
    let ei = MultiVector::blade(n, Blade(1 << i), Q::one());
    let mut out = RatMatrix::zeros(blades.len(), blades.len());
    for (col, b) in blades.iter().enumerate() {
        let img = MultiVec::schouten(g, &ei, &MultiVector::blade(n, *b, Q::one()))
            .expect("same dimension");
        for (bb, c) in img.terms() {
            out[(pos[bb], col)] = c.clone();
        }
    }
    out
}

/// Basis of `(Λ^m g)^g`, as the common kernel of all `ad_{e_i}`.
pub fn invariants(g: &LieAlgebra, m: usize) -> Vec<MultiVector> {
    let n = g.dim();
    if m > n {
        return Vec::new();
    }
    let size = Blade::all(n, m).len();
    let mut stacked = RatMatrix::zeros(0, size);
    for i in 0..n {
        stacked = stacked.vstack(&ad_matrix(g, i, m));
    }
    stacked
        .kernel_basis()
        .into_iter()
        .map(|v| MultiVector::from_coords(n, m, &v).expect("sizes agree"))
        .collect()
}

/// `[r, r]` for the generic bivector of `g`.
pub fn generic_rr(g: &LieAlgebra) -> SymMultiVector {
    let r = SymMultiVector::generic(g.dim(), 2);
    MultiVec::schouten(g, &r, &r).expect("same dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::qi;

    fn e(dim: usize, s: &str) -> MultiVector {
        MultiVector::parse(dim, s, &|_| None).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let w = e(4, "e1").wedge(&e(4, "e2")).unwrap();
        assert_eq!(w, e(4, "e12"));
        assert!(e(4, "e12").wedge(&e(4, "e12")).unwrap().is_zero());
        assert_eq!(e(4, "e12").wedge(&e(4, "e34")).unwrap(), e(4, "e1234"));
        assert_eq!(e(4, "e2").wedge(&e(4, "e1")).unwrap(), e(4, "-e12"));
        assert_eq!(e(4, "e21"), e(4, "-e12"));
    }

    #[test]
    fn blade_order() {
        let names: Vec<String> = Blade::all(4, 2).iter().map(|b| b.name()).collect();
        assert_eq!(names, ["e12", "e13", "e14", "e23", "e24", "e34"]);
        let names: Vec<String> = Blade::all(4, 3).iter().map(|b| b.name()).collect();
        assert_eq!(names, ["e123", "e124", "e134", "e234"]);
        assert_eq!(
            e(4, "e34 - 2*e12 + 1/2*e23").to_string(),
            "-2*e12 + 1/2*e23 + e34"
        );
    }

    #[test]
    fn parse_rejects_mixed_degree() {
        assert!(MultiVector::parse(4, "e1 + e12", &|_| None).is_err());
        assert!(MultiVector::parse(4, "e15", &|_| None).is_err());
        assert_eq!(e(4, "3").coeff(Blade(0)), qi(3));
    }
}
