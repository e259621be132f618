//! Lie algebras given by structure constants over ℚ.

pub mod catalog;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactmath::{Monomial, Poly, RatMatrix, Q};
use crate::parse::{at_line, coord_index, strip_comment, Expr};

/// Largest supported dimension; blades are `u8` bitmasks.
pub const MAX_DIM: usize = 8;

/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`, 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<Q>,
    pub name: String,
    pub params: BTreeMap<String, Q>,
}

impl LieAlgebra {
    /// The abelian algebra of dimension `dim`.
    pub fn abelian(dim: usize) -> Result<Self> {
        if dim > MAX_DIM {
            return Err(Error::DimensionTooLarge(dim));
        }
        Ok(LieAlgebra {
            dim,
            c: vec![Q::zero(); dim * dim * dim],
            name: format!("abelian{dim}"),
            params: BTreeMap::new(),
        })
    }

    /// Builds from a list of `(i, j, [e_i, e_j])` with 0-based indices.
    /// Antisymmetry is imposed; conflicting entries are not detected here.
    pub fn from_brackets(
        dim: usize,
        name: &str,
        brackets: &[(usize, usize, Vec<Q>)],
    ) -> Result<Self> {
        let mut g = LieAlgebra::abelian(dim)?;
        g.name = name.to_string();
        for (i, j, v) in brackets {
            g.set_bracket(*i, *j, v)?;
        }
        Ok(g)
    }

    pub fn set_bracket(&mut self, i: usize, j: usize, v: &[Q]) -> Result<()> {
        let n = self.dim;
        if i >= n || j >= n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: i.max(j) + 1,
            });
        }
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        for (k, x) in v.iter().enumerate() {
            self.c[(i * n + j) * n + k] = x.clone();
            self.c[(j * n + i) * n + k] = -x.clone();
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Structure constant `c_{ij}^k`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Q> {
        let n = self.dim;
        self.c[(i * n + j) * n..(i * n + j + 1) * n].to_vec()
    }

    pub fn bracket(&self, v: &[Q], w: &[Q]) -> Result<Vec<Q>> {
        let n = self.dim;
        for x in [v, w] {
            if x.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: x.len(),
                });
            }
        }
        let mut out = vec![Q::zero(); n];
        for i in 0..n {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if w[j].is_zero() || i == j {
                    continue;
                }
                let f = &v[i] * &w[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        *o += &f * c;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `ad_{e_i}`: column `j` holds `[e_i, e_j]`.
    pub fn ad_matrix(&self, i: usize) -> RatMatrix {
        RatMatrix::from_fn(self.dim, self.dim, |k, j| self.c(i, j, k).clone())
    }

    /// Matrix of `ad_v`.
    pub fn ad(&self, v: &[Q]) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.dim, self.dim);
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                m = m.add(&self.ad_matrix(i).scale(x));
            }
        }
        m
    }

    /// Nonzero brackets `(i, j, [e_i, e_j])` with `i < j`.
    pub fn nonzero_brackets(&self) -> Vec<(usize, usize, Vec<Q>)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let v = self.bracket_basis(i, j);
                if v.iter().any(|x| !x.is_zero()) {
                    out.push((i, j, v));
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Antisymmetry and Jacobi violations, as readable messages.
    pub fn validate(&self) -> Vec<String> {
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.c(i, j, k) != &-self.c(j, i, k).clone() {
                        out.push(format!(
                            "antisymmetry fails: c[{},{}]^{} = {}",
                            i + 1,
                            j + 1,
                            k + 1,
                            self.c(i, j, k)
                        ));
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in 0..n {
                        let mut s = Q::zero();
                        for m in 0..n {
                            s += self.c(i, j, m) * self.c(m, k, l)
                                + self.c(j, k, m) * self.c(m, i, l)
                                + self.c(k, i, m) * self.c(m, j, l);
                        }
                        if !s.is_zero() {
                            out.push(format!(
                                "Jacobi fails on (e{}, e{}, e{}): component e{} is {}",
                                i + 1,
                                j + 1,
                                k + 1,
                                l + 1,
                                s
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    /// Basis of the center, the common kernel of all `ad_{e_i}` viewed as
    /// maps `v ↦ [v, e_i]`.
    pub fn center(&self) -> Vec<Vec<Q>> {
        let n = self.dim;
        // row (i, k): Σ_j v_j c[j][i][k] = 0
        let m = RatMatrix::from_fn(n * n, n, |r, j| self.c(j, r / n, r % n).clone());
        m.kernel_basis()
    }

    /// Parses the plain-text bracket table format:
    /// a `dim N` header, optional `name` and `param` lines, then
    /// `[i,j] = c1*e1 + ...`, with `#` comments.
    pub fn from_text(text: &str, params: &BTreeMap<String, Q>) -> Result<Self> {
        let spec = AlgebraText::parse(text)?;
        spec.instantiate(params)
    }

    /// Writes the bracket table format read by [`LieAlgebra::from_text`].
    pub fn to_text(&self) -> String {
        let mut s = format!("dim {}\nname {}\n", self.dim, self.name);
        for (i, j, v) in self.nonzero_brackets() {
            s.push_str(&format!("[{},{}] = {}\n", i + 1, j + 1, fmt_vector(&v)));
        }
        s
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={}", crate::exactmath::fmt_q(v)))
                .collect();
            write!(f, "({})", ps.join(","))?;
        }
        Ok(())
    }
}

/// Renders a vector of `g` as `e1 - 2*e3`.
pub fn fmt_vector(v: &[Q]) -> String {
    Poly::linear(v).render(&|i| format!("e{}", i + 1))
}

/// Unit vector `e_{i+1}`.
pub fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = num_traits::One::one();
    v
}

/// A parsed algebra file whose coefficients may still depend on parameters.
#[derive(Clone, Debug)]
pub struct AlgebraText {
    pub dim: usize,
    pub name: String,
    pub params: Vec<String>,
    brackets: Vec<(usize, usize, Expr, usize)>,
}

impl AlgebraText {
    pub fn parse(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut name = String::from("custom");
        let mut params = Vec::new();
        let mut brackets = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("dim") {
                let d: usize = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(ln, format!("bad dimension {:?}", rest.trim())))?;
                if d == 0 {
                    return Err(Error::parse(ln, "dimension must be positive"));
                }
                if d > MAX_DIM {
                    return Err(Error::DimensionTooLarge(d));
                }
                dim = Some(d);
            } else if let Some(rest) = line.strip_prefix("name") {
                name = rest.trim().to_string();
            } else if let Some(rest) = line.strip_prefix("param") {
                params.push(rest.trim().to_string());
            } else if line.starts_with('[') {
                let d = dim.ok_or_else(|| Error::parse(ln, "bracket before `dim` header"))?;
                let (lhs, rhs) = line
                    .split_once('=')
                    .ok_or_else(|| Error::parse(ln, "expected `[i,j] = ...`"))?;
                let inner = lhs
                    .trim()
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| Error::parse(ln, "expected `[i,j]`"))?;
                let (a, b) = inner
                    .split_once(',')
                    .ok_or_else(|| Error::parse(ln, "expected `[i,j]`"))?;
                let idx = |s: &str| -> Result<usize> {
                    let i: usize = s
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse(ln, "bad basis index"))?;
                    if i == 0 || i > d {
                        return Err(Error::parse(ln, format!("basis index {i} out of range")));
                    }
                    Ok(i - 1)
                };
                let (i, j) = (idx(a)?, idx(b)?);
                if i == j {
                    return Err(Error::parse(ln, "bracket of a basis element with itself"));
                }
                let e = at_line(Expr::parse(rhs), ln)?;
                brackets.push((i, j, e, ln));
            } else {
                return Err(Error::parse(ln, format!("unrecognised line {line:?}")));
            }
        }
        let dim = dim.ok_or_else(|| Error::parse(0, "missing `dim` header"))?;
        Ok(AlgebraText {
            dim,
            name,
            params,
            brackets,
        })
    }

    /// Binds every declared parameter and evaluates the brackets.
    pub fn instantiate(&self, values: &BTreeMap<String, Q>) -> Result<LieAlgebra> {
        for p in &self.params {
            if !values.contains_key(p) {
                return Err(Error::ParamOutOfRange(format!(
                    "{}: parameter {p} is unbound",
                    self.name
                )));
            }
        }
        for k in values.keys() {
            if !self.params.contains(k) {
                return Err(Error::ParamOutOfRange(format!(
                    "{}: no parameter named {k}",
                    self.name
                )));
            }
        }
        let mut g = LieAlgebra::abelian(self.dim)?;
        g.name = self.name.clone();
        g.params = values.clone();
        let mut seen = std::collections::BTreeSet::new();
        for (i, j, e, ln) in &self.brackets {
            if !seen.insert((*i.min(j), *i.max(j))) {
                return Err(Error::parse(*ln, "bracket given twice"));
            }
            let v = at_line(eval_vector(e, self.dim, 'e', values), *ln)?;
            g.set_bracket(*i, *j, &v)?;
        }
        Ok(g)
    }
}

impl AlgebraText {
    /// Jacobi identity with the parameters kept symbolic: each component of
    /// the Jacobiator is a polynomial in the parameters, and the table defines
    /// a Lie algebra for every parameter value exactly when all vanish.
    pub fn validate_symbolic(&self) -> Result<Vec<String>> {
        let n = self.dim;
        let np = self.params.len();
        let mut c = vec![vec![vec![Poly::zero(); n]; n]; n];
        for (i, j, e, ln) in &self.brackets {
            let p = at_line(
                e.eval(&|s| {
                    if let Some(k) = coord_index(s, 'e') {
                        return (k < n).then(|| Poly::var(k));
                    }
                    self.params
                        .iter()
                        .position(|p| p == s)
                        .map(|k| Poly::var(n + k))
                }),
                *ln,
            )?;
            for (m, coef) in p.terms() {
                let mut exps: Vec<u32> = m.exps().to_vec();
                exps.resize(n + np, 0);
                let basis: Vec<usize> = (0..n).filter(|&k| exps[k] > 0).collect();
                if basis.len() != 1 || exps[basis[0]] != 1 {
                    return Err(Error::parse(
                        *ln,
                        format!("expected a linear combination, got {p}"),
                    ));
                }
                let k = basis[0];
                exps[k] = 0;
                let t = Poly::term(coef.clone(), Monomial::new(exps));
                c[*i][*j][k] = c[*i][*j][k].clone() + t.clone();
                c[*j][*i][k] = c[*j][*i][k].clone() - t;
            }
        }
        let name = |k: usize| {
            if k < n {
                format!("e{}", k + 1)
            } else {
                self.params[k - n].clone()
            }
        };
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for l in 0..n {
                        let mut s = Poly::zero();
                        for m in 0..n {
                            s = s
                                + c[i][j][m].clone() * c[m][k][l].clone()
                                + c[j][k][m].clone() * c[m][i][l].clone()
                                + c[k][i][m].clone() * c[m][j][l].clone();
                        }
                        if !s.is_zero() {
                            out.push(format!(
                                "Jacobi fails on (e{}, e{}, e{}): component e{} is {}",
                                i + 1,
                                j + 1,
                                k + 1,
                                l + 1,
                                s.render(&name)
                            ));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Evaluates an expression that must be linear in `prefix1..prefixN`.
pub(crate) fn eval_vector(
    e: &Expr,
    n: usize,
    prefix: char,
    values: &BTreeMap<String, Q>,
) -> Result<Vec<Q>> {
    let p = e.eval(&|s| {
        if let Some(i) = coord_index(s, prefix) {
            return (i < n).then(|| Poly::var(i));
        }
        values.get(s).map(|q| Poly::constant(q.clone()))
    })?;
    let mut v = vec![Q::zero(); n];
    for (m, c) in p.terms() {
        if m.degree() != 1 {
            return Err(Error::parse(
                0,
                format!("expected a linear combination, got {p}"),
            ));
        }
        let i = m.exps().len() - 1;
        v[i] = c.clone();
    }
    Ok(v)
}
