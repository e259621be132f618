//! Faithful matrix representations for Lie algebras with non-trivial center.
//!
//! `g` is extended to `g̃ = g ⊕ ⟨e⟩` with `[e, e_i] = α_i e_i`. This is a Lie
//! algebra exactly when `diag(α)` is a derivation, i.e. `α_i + α_j = α_k`
//! whenever `c_ij^k ≠ 0`, and `v ↦ ad_v|g̃` is then injective when `diag(α)`
//! has no kernel on the center.

use std::fmt;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{fmt_q, qi, rank_of, RatMatrix, Q};
use crate::liealg::{unit, LieAlgebra};

/// A grading `α` admissible for the extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingSolution {
    pub alphas: Vec<Q>,
    /// Indices `i` with `e_i` central.
    pub center_idx: Vec<usize>,
}

impl fmt::Display for GradingSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.alphas.iter().map(fmt_q).collect();
        write!(f, "alpha = ({})", a.join(", "))
    }
}

/// Coefficient matrix of the equations `α_i + α_j - α_k = 0`, one row per
/// nonzero structure constant.
pub fn grading_system(g: &LieAlgebra) -> RatMatrix {
    let n = g.dim();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                if !g.c(i, j, k).is_zero() {
                    let mut r = vec![Q::zero(); n];
                    r[i] += qi(1);
                    r[j] += qi(1);
                    r[k] -= qi(1);
                    if !rows.contains(&r) {
                        rows.push(r);
                    }
                }
            }
        }
    }
    RatMatrix::from_rows(&rows, n)
}

pub fn center_indices(g: &LieAlgebra) -> Vec<usize> {
    (0..g.dim()).filter(|&i| g.ad_matrix(i).is_zero()).collect()
}

/// Whether `α` solves the grading system and `diag(α)` is injective on the
/// center.
pub fn is_admissible(g: &LieAlgebra, alphas: &[Q]) -> bool {
    alphas.len() == g.dim()
        && grading_system(g).mul_vec(alphas).iter().all(Zero::is_zero)
        && kernel_free_on_center(g, alphas)
}

fn kernel_free_on_center(g: &LieAlgebra, alphas: &[Q]) -> bool {
    let z = g.center();
    let images: Vec<Vec<Q>> = z
        .iter()
        .map(|v| v.iter().zip(alphas).map(|(x, a)| x * a).collect())
        .collect();
    rank_of(&images, g.dim()) == z.len()
}

/// The lexicographically smallest integer grading with `|α_i| ≤ n`, found by
/// scanning integer values of the free parameters of the solution space.
/// Algebras with trivial center get the zero grading, under which the
/// representation is the adjoint one. `None` when no admissible grading lies
/// in the box.
pub fn solve_grading(g: &LieAlgebra) -> Option<GradingSolution> {
    let n = g.dim();
    let center_idx = center_indices(g);
    if g.center().is_empty() {
        return Some(GradingSolution {
            alphas: vec![Q::zero(); n],
            center_idx,
        });
    }
    let basis = grading_system(g).kernel_basis();
    if basis.is_empty() {
        return None;
    }
    let bound = n as i64;
    let free = basis.len();
    let width = (2 * bound + 1) as usize;
    let mut best: Option<Vec<Q>> = None;
    for idx in 0..width.pow(free as u32) {
        let mut r = idx;
        let mut alphas = vec![Q::zero(); n];
        for b in &basis {
            let t = qi((r % width) as i64 - bound);
            r /= width;
            for (a, x) in alphas.iter_mut().zip(b) {
                *a += &t * x;
            }
        }
        let in_box = alphas
            .iter()
            .all(|a| a.is_integer() && a.to_integer().to_i64().is_some_and(|v| v.abs() <= bound));
        if in_box && kernel_free_on_center(g, &alphas) && best.as_ref().is_none_or(|b| alphas < *b)
        {
            best = Some(alphas);
        }
    }
    best.map(|alphas| GradingSolution { alphas, center_idx })
}

/// The extension `g̃`, with `e` as the last basis vector.
pub fn extended_algebra(g: &LieAlgebra, alphas: &[Q]) -> Result<LieAlgebra> {
    let n = g.dim();
    let mut h = LieAlgebra::abelian(n + 1)?;
    h.name = format!("{}~", g.name);
    for i in 0..n {
        for j in i + 1..n {
            let mut v = g.bracket_basis(i, j);
            v.push(Q::zero());
            h.set_bracket(i, j, &v)?;
        }
        let mut v = unit(n + 1, i);
        v[i] = alphas[i].clone();
        h.set_bracket(n, i, &v)?;
    }
    Ok(h)
}

/// Matrices `ℛ_{e_i} = ad_{e_i}` on `g̃`; column `j` is `[e_i, ẽ_j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRep {
    pub matrices: Vec<RatMatrix>,
}

impl MatrixRep {
    /// Pairs `(i, j)` with `[ℛ_i, ℛ_j] ≠ Σ_k c_ij^k ℛ_k`.
    pub fn commutation_failures(&self, g: &LieAlgebra) -> Vec<(usize, usize)> {
        let n = g.dim();
        let m = self.matrices[0].rows();
        let mut bad = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let lhs = self.matrices[i].commutator(&self.matrices[j]);
                let mut rhs = RatMatrix::zeros(m, m);
                for k in 0..n {
                    if !g.c(i, j, k).is_zero() {
                        rhs = rhs.add(&self.matrices[k].scale(g.c(i, j, k)));
                    }
                }
                if lhs != rhs {
                    bad.push((i, j));
                }
            }
        }
        bad
    }

    /// Whether `v ↦ Σ v_i ℛ_i` is injective.
    pub fn is_faithful(&self) -> bool {
        let flat: Vec<Vec<Q>> = self
            .matrices
            .iter()
            .map(|m| m.row_vecs().concat())
            .collect();
        let len = flat.first().map_or(0, Vec::len);
        rank_of(&flat, len) == self.matrices.len()
    }
}

pub fn build_rep(g: &LieAlgebra, sol: &GradingSolution) -> Result<MatrixRep> {
    if sol.alphas.len() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: sol.alphas.len(),
        });
    }
    let h = extended_algebra(g, &sol.alphas)?;
    Ok(MatrixRep {
        matrices: (0..g.dim()).map(|i| h.ad_matrix(i)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::catalog::{all_samples, catalog, extra, CatalogId, Family};

    fn m(rows: &[[i64; 5]]) -> RatMatrix {
        RatMatrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| qi(x)).collect())
                .collect::<Vec<_>>(),
            5,
        )
    }

    #[test]
    fn s1_printed_matrices() {
        let g = catalog(&CatalogId::plain(Family::S1)).unwrap();
        let sol = GradingSolution {
            alphas: vec![qi(1), qi(1), qi(0), qi(0)],
            center_idx: vec![0],
        };
        assert!(is_admissible(&g, &sol.alphas));
        assert_eq!(center_indices(&g), vec![0]);
        let rep = build_rep(&g, &sol).unwrap();
        let z = [0; 5];
        assert_eq!(rep.matrices[0], m(&[[0, 0, 0, 0, -1], z, z, z, z]));
        assert_eq!(
            rep.matrices[1],
            m(&[[0, 0, 0, -1, 0], [0, 0, 0, 0, -1], z, z, z])
        );
        assert_eq!(rep.matrices[2], m(&[z, z, [0, 0, 0, -1, 0], z, z]));
        assert_eq!(
            rep.matrices[3],
            m(&[[0, 1, 0, 0, 0], z, [0, 0, 1, 0, 0], z, z])
        );
        assert_eq!(
            rep.matrices[3].commutator(&rep.matrices[1]),
            rep.matrices[0]
        );
        assert_eq!(
            rep.matrices[3].commutator(&rep.matrices[2]),
            rep.matrices[2]
        );
        assert!(rep.commutation_failures(&g).is_empty());
        assert!(rep.is_faithful());
        assert!(!build_rep(
            &g,
            &GradingSolution {
                alphas: vec![Q::zero(); 4],
                center_idx: vec![0]
            }
        )
        .unwrap()
        .is_faithful());
    }

    #[test]
    fn s1_solution_is_deterministic() {
        let g = catalog(&CatalogId::plain(Family::S1)).unwrap();
        let sol = solve_grading(&g).unwrap();
        assert_eq!(sol.alphas, vec![qi(-4), qi(-4), qi(-4), qi(0)]);
        assert!(is_admissible(&g, &sol.alphas));
    }

    #[test]
    fn infeasible_extensions() {
        assert_eq!(solve_grading(&extra("s6_231").unwrap()), None);
        assert_eq!(solve_grading(&extra("7I").unwrap()), None);
        assert_eq!(center_indices(&extra("s6_231").unwrap()), vec![3]);
        assert_eq!(center_indices(&extra("7I").unwrap()), vec![6]);
    }

    #[test]
    fn abelian_gets_a_faithful_rep() {
        let g = LieAlgebra::abelian(3).unwrap();
        let sol = GradingSolution {
            alphas: vec![qi(1); 3],
            center_idx: vec![0, 1, 2],
        };
        let rep = build_rep(&g, &sol).unwrap();
        for (i, r) in rep.matrices.iter().enumerate() {
            let nonzero: Vec<(usize, usize, Q)> = (0..4)
                .flat_map(|a| (0..4).map(move |b| (a, b)))
                .filter_map(|(a, b)| {
                    let x = r.row(a)[b].clone();
                    (!x.is_zero()).then_some((a, b, x))
                })
                .collect();
            assert_eq!(nonzero, vec![(i, 3, qi(-1))]);
        }
        assert!(rep.is_faithful());
    }

    #[test]
    fn catalog_algebras_with_center_extend() {
        for id in all_samples() {
            let g = catalog(&id).unwrap();
            let sol = solve_grading(&g).unwrap_or_else(|| panic!("{id}"));
            let rep = build_rep(&g, &sol).unwrap();
            assert!(rep.commutation_failures(&g).is_empty(), "{id}");
            assert!(rep.is_faithful(), "{id}");
            assert!(
                extended_algebra(&g, &sol.alphas)
                    .unwrap()
                    .validate()
                    .is_empty(),
                "{id}"
            );
        }
    }
}
