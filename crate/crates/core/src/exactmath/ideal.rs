//! Bounded-degree ideal membership by one linear solve.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::matrix::RatMatrix;
use super::poly::{Monomial, Poly};
use super::rational::Q;

/// Finds cofactors `h_i` with `target = Σ h_i·gens[i]` and `deg h_i ≤ bound`.
///
/// When the target and a generator are both homogeneous only the cofactor
/// monomials of the matching degree are tried, which keeps the system small
/// without losing solutions: the other homogeneous parts of a cofactor can be
/// dropped from any representation.
pub fn ideal_membership(target: &Poly, gens: &[Poly], bound: u32) -> Option<Vec<Poly>> {
    if target.is_zero() {
        return Some(vec![Poly::zero(); gens.len()]);
    }
    let nvars = gens
        .iter()
        .map(Poly::nvars)
        .chain([target.nvars()])
        .max()
        .unwrap_or(0);
    let all_homog = target.is_homogeneous() && gens.iter().all(Poly::is_homogeneous);
    let tdeg = target.degree().unwrap_or(0);

    // unknowns: (generator, cofactor monomial)
    let mut unknowns: Vec<(usize, Monomial)> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        let Some(gd) = g.degree() else { continue };
        let monos = if all_homog {
            if gd > tdeg || tdeg - gd > bound {
                continue;
            }
            Monomial::all_of_degree(nvars, tdeg - gd)
        } else {
            Monomial::all_up_to_degree(nvars, bound)
        };
        unknowns.extend(monos.into_iter().map(|m| (i, m)));
    }

    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    for (m, _) in target.terms() {
        let n = rows.len();
        rows.entry(m.clone()).or_insert(n);
    }
    let mut entries: Vec<(usize, usize, Q)> = Vec::new();
    for (col, (i, m)) in unknowns.iter().enumerate() {
        for (gm, c) in gens[*i].terms() {
            let key = gm.mul(m);
            let n = rows.len();
            let r = *rows.entry(key).or_insert(n);
            entries.push((r, col, c.clone()));
        }
    }
    let mut a = RatMatrix::zeros(rows.len(), unknowns.len());
    for (r, c, v) in entries {
        a[(r, c)] += v;
    }
    let mut b = vec![Q::zero(); rows.len()];
    for (m, c) in target.terms() {
        b[rows[m]] = c.clone();
    }
    let x = a.solve(&b)?;
    let mut cof = vec![Poly::zero(); gens.len()];
    for ((i, m), v) in unknowns.into_iter().zip(x) {
        cof[i].add_term(v, m);
    }
    Some(cof)
}

/// `Σ h_i·g_i`.
pub fn combine(cofactors: &[Poly], gens: &[Poly]) -> Poly {
    cofactors
        .iter()
        .zip(gens)
        .fold(Poly::zero(), |acc, (h, g)| &acc + &(h * g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::qi;

    fn x(i: usize) -> Poly {
        Poly::var(i - 1)
    }

    #[test]
    fn membership_examples() {
        let gens = vec![&x(3) * &x(4), &x(3) * &x(6), x(5).pow(2)];
        let c = ideal_membership(&gens[0], &gens, 0).unwrap();
        assert_eq!(c, vec![Poly::one(), Poly::zero(), Poly::zero()]);

        assert!(ideal_membership(&x(5).pow(2), &[&x(3) * &x(4)], 2).is_none());

        let t = &(&x(3) * &x(4)).scale(&qi(2)) + &x(5).pow(2);
        let g = vec![&x(3) * &x(4), x(5).pow(2)];
        let c = ideal_membership(&t, &g, 0).unwrap();
        assert_eq!(c, vec![Poly::constant(qi(2)), Poly::one()]);
    }

    #[test]
    fn inhomogeneous_cofactors() {
        // x1^2 - 1 = (x1 + 1)(x1 - 1)
        let g = &x(1) - &Poly::one();
        let t = &x(1).pow(2) - &Poly::one();
        let c = ideal_membership(&t, std::slice::from_ref(&g), 1).unwrap();
        assert_eq!(combine(&c, &[g]), t);
    }
}
