//! Sparse multivariate polynomials over ℚ.
//!
//! Monomials are dense exponent vectors with trailing zeros trimmed, so two
//! polynomials compare equal iff their term maps are equal regardless of the
//! number of variables they were built with. Terms are kept in a `BTreeMap`
//! under graded-lex order; display walks the map from the largest monomial.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{fmt_q, Q};
use crate::error::{Error, Result};

/// Exponent vector. `Monomial(vec![0, 2, 1])` is `x2^2*x3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn var(i: usize) -> Self {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// One past the largest variable index that occurs.
    pub fn span(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        Monomial((0..n).map(|i| self.exp(i) + other.exp(i)).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.0.len() > self.0.len() {
            return None;
        }
        let mut e = self.0.clone();
        for (i, &b) in other.0.iter().enumerate() {
            if e[i] < b {
                return None;
            }
            e[i] -= b;
        }
        Some(Monomial::new(e))
    }

    /// Canonical text form, e.g. `x3*x4` or `x5^2`; `1` for the unit.
    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names(i)),
                _ => parts.push(format!("{}^{}", names(i), e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// All monomials in `nvars` variables of total degree exactly `d`,
    /// largest first.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(i: usize, nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if i + 1 == nvars {
                cur.push(left);
                out.push(Monomial::new(cur.clone()));
                cur.pop();
                return;
            }
            for e in (0..=left).rev() {
                cur.push(e);
                rec(i + 1, nvars, left - e, cur, out);
                cur.pop();
            }
        }
        if nvars == 0 {
            return if d == 0 {
                vec![Monomial::one()]
            } else {
                vec![]
            };
        }
        let mut out = Vec::new();
        rec(0, nvars, d, &mut Vec::new(), &mut out);
        out
    }

    pub fn all_up_to_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        (0..=d)
            .flat_map(|k| Monomial::all_of_degree(nvars, k))
            .collect()
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: higher total degree is larger; ties broken by
    /// the first differing exponent, x1 dominating.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&other.exp(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in variables `x1..xN` (0-based ids internally).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Q) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn var(i: usize) -> Self {
        Poly::term(Q::one(), Monomial::var(i))
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Linear form `Σ coeffs[i]·x_{i+1}`.
    pub fn linear(coeffs: &[Q]) -> Self {
        let mut p = Poly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(c.clone(), Monomial::var(i));
        }
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(c, m);
        }
        p
    }

    pub fn add_term(&mut self, c: Q, m: Monomial) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms from the largest monomial down.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Monomial::one())
    }

    /// Number of variables needed to evaluate: one past the largest index used.
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(Monomial::span).max().unwrap_or(0)
    }

    /// Variable ids that actually occur.
    pub fn vars(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.nvars())
            .filter(|&i| self.terms.keys().any(|m| m.exp(i) > 0))
            .collect();
        v.dedup();
        v
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Q, m: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at a point; every occurring variable must be assigned.
    pub fn eval(&self, point: &[Q]) -> Result<Q> {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = point.get(i).ok_or(Error::MissingVariable(i))?;
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Evaluation with a sparse assignment.
    pub fn eval_map(&self, point: &BTreeMap<usize, Q>) -> Result<Q> {
        let n = self.nvars();
        let mut dense = Vec::with_capacity(n);
        for i in 0..n {
            match point.get(&i) {
                Some(x) => dense.push(x.clone()),
                None if self.terms.keys().any(|m| m.exp(i) > 0) => {
                    return Err(Error::MissingVariable(i))
                }
                None => dense.push(Q::zero()),
            }
        }
        self.eval(&dense)
    }

    /// ∂/∂x_i.
    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let mut ex = m.exps().to_vec();
            ex[i] -= 1;
            out.add_term(c * Q::from_integer(e.into()), Monomial::new(ex));
        }
        out
    }

    /// Replaces x_i by `subs[i]`. Variables beyond `subs` must not occur.
    pub fn substitute(&self, subs: &[Poly]) -> Result<Poly> {
        let mut out = Poly::zero();
        let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one()]; subs.len()];
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let s = subs.get(i).ok_or(Error::MissingVariable(i))?;
                let pw = &mut powers[i];
                while pw.len() <= e as usize {
                    let next = pw.last().unwrap() * s;
                    pw.push(next);
                }
                t = &t * &pw[e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Keeps only the homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops all terms of degree greater than `d`.
    pub fn truncate(&self, d: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Scales so the leading coefficient is one (zero stays zero).
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => self.scale(&(Q::one() / c)),
        }
    }

    /// Renders with custom variable names.
    pub fn render(&self, names: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c < &Q::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.render(names);
            if m.degree() == 0 {
                s.push_str(&fmt_q(&a));
            } else if a.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&fmt_q(&a));
                s.push('*');
                s.push_str(&mono);
            }
        }
        s
    }

    /// `(monomial string, coefficient)` pairs in display order.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        self.terms()
            .map(|(m, c)| (m.render(&xname), fmt_q(c)))
            .collect()
    }
}

/// Default coordinate names `x1, x2, …`.
pub fn xname(i: usize) -> String {
    format!("x{}", i + 1)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&xname))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(c.clone(), m.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(-c.clone(), m.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(ca * cb, a.mul(b));
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::qi;

    fn x(i: usize) -> Poly {
        Poly::var(i - 1)
    }

    #[test]
    fn display_is_graded_lex() {
        let p = &(&x(3) * &x(4)) - &(&(&x(2) * &x(5)) + &(&x(4) * &x(5)));
        assert_eq!(p.to_string(), "-x2*x5 + x3*x4 - x4*x5");
        let p = &x(5).pow(2).scale(&qi(-2)) + &Poly::constant(qi(3));
        assert_eq!(p.to_string(), "-2*x5^2 + 3");
    }

    #[test]
    fn eval_reports_missing_variable() {
        let p = &x(1) * &x(6);
        assert_eq!(p.eval(&[qi(1)]), Err(Error::MissingVariable(5)));
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(Monomial::all_of_degree(6, 2).len(), 21);
        assert_eq!(Monomial::all_up_to_degree(6, 2).len(), 28);
        let m = Monomial::all_of_degree(3, 1);
        assert_eq!(
            m,
            vec![Monomial::var(0), Monomial::var(1), Monomial::var(2)]
        );
    }

    #[test]
    fn substitute_composes() {
        // (x1 + x2)^2 at x1 = t, x2 = 2t
        let p = (&x(1) + &x(2)).pow(2);
        let t = Poly::var(0);
        let r = p.substitute(&[t.clone(), t.scale(&qi(2))]).unwrap();
        assert_eq!(r, t.pow(2).scale(&qi(9)));
    }
}
