//! Comparison of real zero sets of polynomial systems without Gröbner bases:
//! a sum-of-squares closure, bounded-degree containment both ways, and
//! agreement on random rational points.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactmath::{ideal_membership, Monomial, Poly, RatMatrix, Q};

/// Linear forms `l_k` with `q = ±Σ d_k l_k²`, `d_k > 0`, when the quadratic
/// form `q` is semidefinite; `None` otherwise.
pub fn semidefinite_square_roots(q: &Poly) -> Option<Vec<Poly>> {
    if q.degree() != Some(2) || !q.is_homogeneous() {
        return None;
    }
    let n = q.nvars();
    let half = Q::new(1.into(), 2.into());
    let mut s = RatMatrix::zeros(n, n);
    for (m, c) in q.terms() {
        let ix: Vec<usize> = (0..n).filter(|&i| m.exp(i) > 0).collect();
        match ix[..] {
            [i] => s[(i, i)] = c.clone(),
            [i, j] => {
                s[(i, j)] = c * &half;
                s[(j, i)] = c * &half;
            }
            _ => return None,
        }
    }
    let lead_sign = (0..n).map(|i| s[(i, i)].clone()).find(|x| !x.is_zero())?;
    if lead_sign.is_negative() {
        s = s.scale(&-Q::one());
    }
    let mut forms = Vec::new();
    for k in 0..n {
        let d = s[(k, k)].clone();
        if d.is_negative() {
            return None;
        }
        if d.is_zero() {
            if (k..n).any(|j| !s[(k, j)].is_zero()) {
                return None;
            }
            continue;
        }
        // l = x_k + Σ_{j>k} s_kj/d x_j
        let mut l = vec![Q::zero(); n];
        for (j, lj) in l.iter_mut().enumerate().skip(k) {
            *lj = &s[(k, j)] / &d;
        }
        forms.push(Poly::linear(&l));
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &s[(i, k)] * &s[(k, j)] / &d;
                s[(i, j)] -= t;
            }
        }
    }
    Some(forms)
}

/// Substitution eliminating the pivot variables of a set of linear forms.
fn linear_reducer(lin: &[Poly], n: usize) -> Vec<Poly> {
    let rows: Vec<Vec<Q>> = lin
        .iter()
        .map(|l| (0..n).map(|i| l.coeff(&Monomial::var(i))).collect())
        .collect();
    let (r, piv) = RatMatrix::from_rows(&rows, n).rref();
    let mut subs: Vec<Poly> = (0..n).map(Poly::var).collect();
    for (k, &p) in piv.iter().enumerate() {
        let mut s = Poly::zero();
        for j in 0..n {
            if j != p && !r[(k, j)].is_zero() {
                s.add_term(-r[(k, j)].clone(), Monomial::var(j));
            }
        }
        subs[p] = s;
    }
    subs
}

/// Adds the linear consequences of semidefinite quadratics, repeatedly
/// reducing the system modulo the linear forms found so far.
pub fn real_closure(gens: &[Poly]) -> Vec<Poly> {
    let n = gens.iter().map(Poly::nvars).max().unwrap_or(0);
    let mut lin: Vec<Poly> = gens
        .iter()
        .filter(|g| g.degree() == Some(1) && g.is_homogeneous())
        .cloned()
        .collect();
    loop {
        let subs = linear_reducer(&lin, n);
        let before = crate::exactmath::rank_of(
            &lin.iter()
                .map(|l| (0..n).map(|i| l.coeff(&Monomial::var(i))).collect())
                .collect::<Vec<_>>(),
            n,
        );
        let mut added = false;
        for g in gens {
            let red = g.substitute(&subs).expect("all variables substituted");
            if let Some(fs) = semidefinite_square_roots(&red) {
                for f in fs {
                    lin.push(f);
                    added = true;
                }
            } else if red.degree() == Some(1) && red.is_homogeneous() {
                lin.push(red);
                added = true;
            }
        }
        let after = crate::exactmath::rank_of(
            &lin.iter()
                .map(|l| (0..n).map(|i| l.coeff(&Monomial::var(i))).collect())
                .collect::<Vec<_>>(),
            n,
        );
        if !added || after == before {
            break;
        }
    }
    let mut out = gens.to_vec();
    out.extend(lin);
    out
}

/// Whether `p` vanishes on the real zero set of `gens`, certified by
/// `p^k ∈ ⟨real_closure(gens)⟩` for some `k ≤ 2` with cofactors of degree
/// at most `bound`. `false` means "not certified", not "does not vanish".
pub fn certify_vanishing(p: &Poly, closure: &[Poly], bound: u32) -> bool {
    (1..=2).any(|k| ideal_membership(&p.pow(k), closure, bound).is_some())
}

/// Outcome of comparing two systems as real varieties.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarietyComparison {
    /// Polynomials of the second system not certified to vanish on the first.
    pub missing_forward: Vec<String>,
    /// Polynomials of the first system not certified to vanish on the second.
    pub missing_backward: Vec<String>,
    pub points: usize,
    /// Sample points lying on both varieties.
    pub common_points: usize,
    /// Sample points where exactly one system vanishes.
    pub disagreements: Vec<Vec<String>>,
}

impl VarietyComparison {
    pub fn equal(&self) -> bool {
        self.missing_forward.is_empty()
            && self.missing_backward.is_empty()
            && self.disagreements.is_empty()
    }
}

/// Random rational point: each coordinate is zero with probability 1/2,
/// otherwise `p/q` with `|p| ≤ 3`, `1 ≤ q ≤ 3`.
pub fn random_point(rng: &mut impl Rng, n: usize) -> Vec<Q> {
    (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Q::zero()
            } else {
                let mut p: i64 = rng.gen_range(-3..=3);
                if p == 0 {
                    p = 1;
                }
                Q::new(p.into(), rng.gen_range(1i64..=3).into())
            }
        })
        .collect()
}

fn vanishes(sys: &[Poly], p: &[Q]) -> bool {
    sys.iter()
        .all(|f| f.eval(p).map(|v| v.is_zero()).unwrap_or(false))
}

/// Compares `a` and `b` as real varieties in `n` variables.
pub fn compare_varieties(
    a: &[Poly],
    b: &[Poly],
    n: usize,
    points: usize,
    seed: u64,
) -> VarietyComparison {
    let ca = real_closure(a);
    let cb = real_closure(b);
    let mut out = VarietyComparison {
        points,
        ..Default::default()
    };
    for p in b {
        if !certify_vanishing(p, &ca, 2) {
            out.missing_forward.push(p.to_string());
        }
    }
    for p in a {
        if !certify_vanishing(p, &cb, 2) {
            out.missing_backward.push(p.to_string());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..points {
        let x = random_point(&mut rng, n);
        let (va, vb) = (vanishes(a, &x), vanishes(b, &x));
        if va && vb {
            out.common_points += 1;
        }
        if va != vb && out.disagreements.len() < 5 {
            out.disagreements
                .push(x.iter().map(crate::exactmath::fmt_q).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::qi;

    fn x(i: usize) -> Poly {
        Poly::var(i - 1)
    }

    #[test]
    fn sum_of_squares_closure() {
        let q = &x(5).pow(2) + &x(6).pow(2);
        let f = semidefinite_square_roots(&q).unwrap();
        assert_eq!(f, vec![x(5), x(6)]);
        assert!(semidefinite_square_roots(&(&x(1) * &x(2))).is_none());
        let neg = -(&x(1).pow(2) + &(&x(1) * &x(2)).scale(&qi(2))) - x(2).pow(2).scale(&qi(2));
        assert_eq!(semidefinite_square_roots(&neg).unwrap().len(), 2);
    }

    #[test]
    fn compare_simple() {
        let a = vec![&x(3) * &x(4), &x(3) * &x(6), x(5).pow(2)];
        let b = vec![&x(3) * &x(4), &x(3) * &x(6), x(5)];
        let c = compare_varieties(&a, &b, 6, 500, 1);
        assert!(c.equal(), "{c:?}");
        let d = compare_varieties(&a, &[x(5)], 6, 500, 1);
        assert!(!d.equal());
    }
}
