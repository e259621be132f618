//! Derivations of g, their lifts to Λ^m g, the induced linear vector fields
//! and orbit dimensions.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactmath::{rank_of, Poly, RatMatrix, Q};
use crate::grassmann::{Blade, MultiVec, MultiVector};
use crate::liealg::catalog::{instantiate_unchecked, CatalogId};
use crate::liealg::LieAlgebra;

/// A derivation as its matrix: column `j` is `d(e_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub matrix: RatMatrix,
}

impl Derivation {
    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        self.matrix.mul_vec(v)
    }

    /// Maximum deviation from the Leibniz rule over basis pairs, as a list
    /// of failing pairs.
    pub fn leibniz_failures(&self, g: &LieAlgebra) -> Vec<(usize, usize)> {
        let n = g.dim();
        let col = |j| self.matrix.col(j);
        let mut bad = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let lhs = self.apply(&g.bracket_basis(a, b));
                let ea = crate::liealg::unit(n, a);
                let eb = crate::liealg::unit(n, b);
                let r1 = g.bracket(&col(a), &eb).expect("dim");
                let r2 = g.bracket(&ea, &col(b)).expect("dim");
                let rhs: Vec<Q> = r1.iter().zip(&r2).map(|(x, y)| x + y).collect();
                if lhs != rhs {
                    bad.push((a, b));
                }
            }
        }
        bad
    }
}

/// Linear field `X(p) = A·p` on the coordinates of Λ^m g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearVectorField {
    pub matrix: RatMatrix,
}

impl LinearVectorField {
    pub fn nvars(&self) -> usize {
        self.matrix.cols()
    }

    pub fn at(&self, p: &[Q]) -> Vec<Q> {
        self.matrix.mul_vec(p)
    }

    /// Coefficient polynomial of `∂_{x_{a+1}}`.
    pub fn component(&self, a: usize) -> Poly {
        Poly::linear(&self.matrix.row(a))
    }

    /// Text form `2*x1*∂1 + x5*∂3`, components in coordinate order.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        for a in 0..self.matrix.rows() {
            let c = self.component(a);
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let body = if c.len() > 1 { format!("({s})") } else { s };
            parts.push(format!("{body}*d{}", a + 1));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for LinearVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Leibniz system on the entries `d[i][j]` (variable `i*n + j`).
pub fn leibniz_matrix(g: &LieAlgebra) -> RatMatrix {
    let n = g.dim();
    let var = |i: usize, j: usize| i * n + j;
    let mut rows = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for k in 0..n {
                let mut row = vec![Q::zero(); n * n];
                // d[e_a, e_b]_k = Σ_m c_ab^m d[k][m]
                for m in 0..n {
                    row[var(k, m)] += g.c(a, b, m);
                }
                // − [d e_a, e_b]_k − [e_a, d e_b]_k
                for i in 0..n {
                    row[var(i, a)] -= g.c(i, b, k);
                    row[var(i, b)] -= g.c(a, i, k);
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    RatMatrix::from_rows(&rows, n * n)
}

fn to_derivations(n: usize, basis: Vec<Vec<Q>>) -> Vec<Derivation> {
    basis
        .into_iter()
        .map(|v| Derivation {
            matrix: RatMatrix::from_fn(n, n, |i, j| v[i * n + j].clone()),
        })
        .collect()
}

/// Basis of der(g), one kernel solve of the Leibniz system.
pub fn derivation_basis(g: &LieAlgebra) -> Vec<Derivation> {
    to_derivations(g.dim(), leibniz_matrix(g).kernel_basis())
}

/// Derivations common to several algebras on the same vector space, e.g. a
/// parameterized family at a list of parameter values.
pub fn common_derivations(gs: &[LieAlgebra]) -> Result<Vec<Derivation>> {
    let n = gs.first().map(LieAlgebra::dim).unwrap_or(0);
    let mut m = RatMatrix::zeros(0, n * n);
    for g in gs {
        if g.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: g.dim(),
            });
        }
        m = m.vstack(&leibniz_matrix(g));
    }
    Ok(to_derivations(n, m.kernel_basis()))
}

/// Derivations `d0 + a·d1` of a one-parameter family that stay derivations
/// for every value `a` of the parameter, evaluated at the parameter of `id`.
/// At special values this is the limit of the generic derivation algebra,
/// which can be strictly smaller than der(g). The structure constants must
/// be affine in the parameter.
pub fn generic_derivations(id: &CatalogId) -> Result<Vec<Derivation>> {
    let [name] = id.family.param_names() else {
        return Err(Error::ParamOutOfRange(format!(
            "{} does not have exactly one parameter",
            id.family
        )));
    };
    let at = |v: i64| {
        let params = BTreeMap::from([(name.to_string(), crate::exactmath::qi(v))]);
        instantiate_unchecked(&CatalogId::new(id.family, params))
    };
    let (g0, g1, g2) = (at(0)?, at(1)?, at(2)?);
    let l0 = leibniz_matrix_full(&g0);
    let l1 = leibniz_matrix_full(&g1).sub(&l0);
    if leibniz_matrix_full(&g2) != l0.add(&l1.scale(&crate::exactmath::qi(2))) {
        return Err(Error::ParamOutOfRange(format!(
            "{}: structure constants are not affine in {name}",
            id.family
        )));
    }
    let n = g0.dim();
    let (r, m) = (l0.rows(), n * n);
    // unknowns (d0, d1): L0 d0 = 0, L1 d0 + L0 d1 = 0, L1 d1 = 0
    let mut sys = RatMatrix::zeros(3 * r, 2 * m);
    for i in 0..r {
        for j in 0..m {
            sys[(i, j)] = l0[(i, j)].clone();
            sys[(r + i, j)] = l1[(i, j)].clone();
            sys[(r + i, m + j)] = l0[(i, j)].clone();
            sys[(2 * r + i, m + j)] = l1[(i, j)].clone();
        }
    }
    let a = id
        .param(name)
        .cloned()
        .ok_or_else(|| Error::ParamOutOfRange(format!("{name} unset")))?;
    let mut basis: Vec<Vec<Q>> = Vec::new();
    for v in sys.kernel_basis() {
        let d: Vec<Q> = (0..m).map(|j| &v[j] + &a * &v[m + j]).collect();
        let mut trial = basis.clone();
        trial.push(d.clone());
        if rank_of(&trial, m) > basis.len() {
            basis.push(d);
        }
    }
    Ok(to_derivations(n, basis))
}

/// Leibniz system with one row per `(a, b, k)`, zero rows included, so
/// that systems of different algebras line up row by row.
fn leibniz_matrix_full(g: &LieAlgebra) -> RatMatrix {
    let n = g.dim();
    let var = |i: usize, j: usize| i * n + j;
    let mut m = RatMatrix::zeros(n * n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                let row = (a * n + b) * n + k;
                for x in 0..n {
                    m[(row, var(k, x))] += g.c(a, b, x);
                }
                for i in 0..n {
                    m[(row, var(i, a))] -= g.c(i, b, k);
                    m[(row, var(i, b))] -= g.c(a, i, k);
                }
            }
        }
    }
    m
}

/// Matrix of the derivation lift `Λ^m d` in lexicographic blade coordinates.
pub fn lift_matrix(d: &RatMatrix, m: usize) -> RatMatrix {
    let n = d.rows();
    let blades = Blade::all(n, m);
    let mut out = RatMatrix::zeros(blades.len(), blades.len());
    for (col, b) in blades.iter().enumerate() {
        let ix = b.indices();
        let mut img = MultiVector::zero(n, m);
        for t in 0..m {
            let mut acc = MultiVector::blade(n, Blade(0), num_traits::One::one());
            for (s, &i) in ix.iter().enumerate() {
                let f = if s == t {
                    MultiVector::from_vector(&d.col(i))
                } else {
                    MultiVector::blade(n, Blade(1 << i), num_traits::One::one())
                };
                acc = acc.wedge(&f).expect("dim");
            }
            img = img.add(&acc).expect("dim");
        }
        for (row, bb) in blades.iter().enumerate() {
            out[(row, col)] = img.coeff(*bb);
        }
    }
    out
}

/// Matrix of the group lift `Λ^m T` (`T e_{i1} ∧ … ∧ T e_{im}`).
pub fn wedge_power(t: &RatMatrix, m: usize) -> RatMatrix {
    let n = t.rows();
    let blades = Blade::all(n, m);
    let mut out = RatMatrix::zeros(blades.len(), blades.len());
    for (col, b) in blades.iter().enumerate() {
        let mut acc = MultiVector::blade(n, Blade(0), num_traits::One::one());
        for i in b.indices() {
            acc = acc
                .wedge(&MultiVector::from_vector(&t.col(i)))
                .expect("dim");
        }
        for (row, bb) in blades.iter().enumerate() {
            out[(row, col)] = acc.coeff(*bb);
        }
    }
    out
}

/// `Λ^m d` as a linear vector field.
pub fn lift(d: &Derivation, m: usize) -> LinearVectorField {
    LinearVectorField {
        matrix: lift_matrix(&d.matrix, m),
    }
}

/// Lifts of the derivation basis: a basis of the fundamental fields on Λ^m g.
pub fn fundamental_fields(g: &LieAlgebra, m: usize) -> Vec<LinearVectorField> {
    derivation_basis(g).iter().map(|d| lift(d, m)).collect()
}

/// Fields from an explicit derivation list.
pub fn fields_of(ds: &[Derivation], m: usize) -> Vec<LinearVectorField> {
    ds.iter().map(|d| lift(d, m)).collect()
}

/// `dim Im(d ↦ Λ^m d (w))` over der(g).
pub fn orbit_dim(g: &LieAlgebra, w: &MultiVector) -> Result<usize> {
    if w.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: w.dim(),
        });
    }
    Ok(orbit_dim_with(&derivation_basis(g), w))
}

/// As [`orbit_dim`] with a given derivation list.
pub fn orbit_dim_with(ds: &[Derivation], w: &MultiVector) -> usize {
    let p = w.coords();
    field_rank_at(&fields_of(ds, w.degree()), &p)
}

/// Rank of the fields evaluated at `p`.
pub fn field_rank_at(fields: &[LinearVectorField], p: &[Q]) -> usize {
    let vs: Vec<Vec<Q>> = fields.iter().map(|x| x.at(p)).collect();
    rank_of(&vs, p.len())
}

/// `X f = Σ_a (A·x)_a ∂f/∂x_a`.
pub fn vf_apply(x: &LinearVectorField, f: &Poly) -> Result<Poly> {
    let n = x.nvars();
    if f.nvars() > n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.nvars(),
        });
    }
    let mut out = Poly::zero();
    for a in 0..n {
        let d = f.partial(a);
        if d.is_zero() {
            continue;
        }
        let comp = x.component(a);
        if !comp.is_zero() {
            out = &out + &(&comp * &d);
        }
    }
    Ok(out)
}

/// Whether `d` lies in the span of `basis`.
pub fn in_span(basis: &[Derivation], d: &Derivation) -> bool {
    let n = d.matrix.rows();
    let flat = |m: &RatMatrix| {
        (0..n * n)
            .map(|k| m[(k / n, k % n)].clone())
            .collect::<Vec<_>>()
    };
    let mut vs: Vec<Vec<Q>> = basis.iter().map(|b| flat(&b.matrix)).collect();
    let r0 = rank_of(&vs, n * n);
    vs.push(flat(&d.matrix));
    rank_of(&vs, n * n) == r0
}

/// Inner derivation `ad_{e_i}`.
pub fn inner(g: &LieAlgebra, i: usize) -> Derivation {
    Derivation {
        matrix: g.ad_matrix(i),
    }
}

/// `Λ^m T` applied to a multivector.
pub fn apply_wedge_power(t: &RatMatrix, w: &MultiVector) -> MultiVector {
    let x = wedge_power(t, w.degree()).mul_vec(&w.coords());
    MultiVec::from_coords(w.dim(), w.degree(), &x).expect("sizes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::qi;

    #[test]
    fn identity_lift_and_abelian() {
        let id = Derivation {
            matrix: RatMatrix::identity(4),
        };
        assert_eq!(lift(&id, 2).matrix, RatMatrix::identity(6).scale(&qi(2)));
        let zero = Derivation {
            matrix: RatMatrix::zeros(4, 4),
        };
        assert!(lift(&zero, 2).matrix.is_zero());
        let ab = LieAlgebra::abelian(3).unwrap();
        assert_eq!(derivation_basis(&ab).len(), 9);
    }

    #[test]
    fn euler_identity() {
        let x = LinearVectorField {
            matrix: RatMatrix::identity(6),
        };
        let f = &Poly::var(2) * &Poly::var(3);
        assert_eq!(vf_apply(&x, &f).unwrap(), f.scale(&qi(2)));
    }
}
