//! The thirteen real four-dimensional indecomposable families, read from the
//! bracket tables under `data/algebras`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use super::{AlgebraText, LieAlgebra};
use crate::data;
use crate::error::{Error, Result};
use crate::exactmath::{fmt_q, parse_q, q, qi, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    S8,
    S9,
    S10,
    S11,
    S12,
    N1,
}

impl Family {
    pub const ALL: [Family; 13] = [
        Family::S1,
        Family::S2,
        Family::S3,
        Family::S4,
        Family::S5,
        Family::S6,
        Family::S7,
        Family::S8,
        Family::S9,
        Family::S10,
        Family::S11,
        Family::S12,
        Family::N1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::S1 => "s1",
            Family::S2 => "s2",
            Family::S3 => "s3",
            Family::S4 => "s4",
            Family::S5 => "s5",
            Family::S6 => "s6",
            Family::S7 => "s7",
            Family::S8 => "s8",
            Family::S9 => "s9",
            Family::S10 => "s10",
            Family::S11 => "s11",
            Family::S12 => "s12",
            Family::N1 => "n1",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::S3 | Family::S5 => &["alpha", "beta"],
            Family::S4 | Family::S8 | Family::S9 => &["alpha"],
            _ => &[],
        }
    }

    /// Parameter values used when a family is exercised without explicit
    /// parameters: a generic point plus every special value that changes
    /// the structure of the tables.
    pub fn samples(self) -> Vec<BTreeMap<String, Q>> {
        let one = |a: Q| BTreeMap::from([("alpha".to_string(), a)]);
        let two = |a: Q, b: Q| BTreeMap::from([("alpha".to_string(), a), ("beta".to_string(), b)]);
        match self {
            Family::S3 => vec![
                two(q(2, 3), q(1, 3)),
                two(q(1, 2), q(-1, 2)),
                two(q(-1, 2), q(-1, 2)),
                two(q(1, 2), q(1, 2)),
                two(qi(1), qi(-1)),
                two(qi(1), q(1, 2)),
                two(qi(1), q(-1, 2)),
                two(qi(1), qi(1)),
                two(qi(-1), q(1, 2)),
                two(qi(-1), qi(1)),
                two(q(-2, 3), q(-1, 3)),
                two(q(-1, 2), q(1, 3)),
            ],
            Family::S4 => vec![
                one(q(1, 2)),
                one(qi(-2)),
                one(qi(-1)),
                one(qi(1)),
                one(qi(3)),
            ],
            Family::S5 => vec![
                two(qi(1), q(1, 2)),
                two(qi(1), qi(0)),
                two(qi(2), qi(-1)),
                two(q(1, 2), q(-1, 3)),
            ],
            Family::S8 => vec![one(q(1, 3)), one(q(-1, 2)), one(qi(1)), one(q(-1, 3))],
            Family::S9 => vec![one(qi(1)), one(q(1, 2)), one(qi(2))],
            _ => vec![BTreeMap::new()],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownAlgebra(s.to_string()))
    }
}

/// A family together with its rational parameters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CatalogId {
    pub family: Family,
    pub params: BTreeMap<String, Q>,
}

impl CatalogId {
    pub fn new(family: Family, params: BTreeMap<String, Q>) -> Self {
        CatalogId { family, params }
    }

    pub fn plain(family: Family) -> Self {
        CatalogId {
            family,
            params: BTreeMap::new(),
        }
    }

    /// `CatalogId::with(S3, &[("alpha", a), ("beta", b)])`.
    pub fn with(family: Family, params: &[(&str, Q)]) -> Self {
        CatalogId {
            family,
            params: params
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        }
    }

    pub fn param(&self, name: &str) -> Option<&Q> {
        self.params.get(name)
    }

    /// Parses `s3`, `s3(alpha=1,beta=-1/2)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (fam, rest) = match s.split_once('(') {
            Some((f, r)) => (
                f,
                r.strip_suffix(')')
                    .ok_or_else(|| Error::UnknownAlgebra(s.to_string()))?,
            ),
            None => (s, ""),
        };
        let family: Family = fam.trim().parse()?;
        let mut params = BTreeMap::new();
        for kv in rest.split(',').filter(|t| !t.trim().is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| {
                Error::ParamOutOfRange(format!("expected name=value, got {kv:?}"))
            })?;
            params.insert(k.trim().to_string(), parse_q(v)?);
        }
        Ok(CatalogId { family, params })
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.family.name())?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self
                .params
                .iter()
                .map(|(k, v)| format!("{k}={}", fmt_q(v)))
                .collect();
            write!(f, "({})", ps.join(","))?;
        }
        Ok(())
    }
}

/// Range checks of the classification; returns advisory notes for inputs
/// that are accepted but fall outside the duplicate-free convention.
pub fn check_params(id: &CatalogId) -> Result<Vec<String>> {
    let fam = id.family;
    let names = fam.param_names();
    for k in id.params.keys() {
        if !names.contains(&k.as_str()) {
            return Err(Error::ParamOutOfRange(format!(
                "{fam} has no parameter {k}"
            )));
        }
    }
    let get = |n: &str| -> Result<Q> {
        id.params
            .get(n)
            .cloned()
            .ok_or_else(|| Error::ParamOutOfRange(format!("{fam} needs parameter {n}")))
    };
    let bad = |why: &str| Err(Error::ParamOutOfRange(format!("{id}: {why}")));
    let mut notes = Vec::new();
    match fam {
        Family::S3 => {
            let (a, b) = (get("alpha")?, get("beta")?);
            if b.is_zero() || b.abs() > a.abs() || a.abs() > qi(1) {
                return bad("requires 0 < |beta| <= |alpha| <= 1");
            }
            if a == qi(-1) && b == qi(-1) {
                return bad("(alpha, beta) = (-1, -1) is excluded");
            }
            if a.abs() == b.abs() && a < b {
                notes.push(format!(
                    "{id}: |alpha| = |beta| with alpha < beta; the tables assume alpha >= beta"
                ));
            }
        }
        Family::S4 => {
            if get("alpha")?.is_zero() {
                return bad("requires alpha != 0");
            }
        }
        Family::S5 => {
            get("beta")?;
            if !get("alpha")?.is_positive() {
                return bad("requires alpha > 0");
            }
        }
        Family::S8 => {
            let a = get("alpha")?;
            if a <= qi(-1) || a > qi(1) || a.is_zero() {
                return bad("requires alpha in (-1, 1] minus {0}");
            }
        }
        Family::S9 if !get("alpha")?.is_positive() => {
            return bad("requires alpha > 0");
        }
        _ => {}
    }
    Ok(notes)
}

/// Instantiates a catalog family; parameters outside the table ranges are
/// rejected.
pub fn catalog(id: &CatalogId) -> Result<LieAlgebra> {
    check_params(id)?;
    instantiate_unchecked(id)
}

/// As [`catalog`] but without range checks, for parameter sweeps that probe
/// the boundary of the families.
pub fn instantiate_unchecked(id: &CatalogId) -> Result<LieAlgebra> {
    let text = data::read(&format!("algebras/{}.alg", id.family.name()))?;
    AlgebraText::parse(&text)?.instantiate(&id.params)
}

/// Every catalog instance at its sample parameters.
pub fn all_samples() -> Vec<CatalogId> {
    Family::ALL
        .into_iter()
        .flat_map(|f| f.samples().into_iter().map(move |p| CatalogId::new(f, p)))
        .collect()
}

/// Algebras shipped as data outside the thirteen families (`s6_231`, `7I`).
pub fn extra(name: &str) -> Result<LieAlgebra> {
    let text = data::read(&format!("algebras/{name}.alg"))
        .map_err(|_| Error::UnknownAlgebra(name.to_string()))?;
    LieAlgebra::from_text(&text, &BTreeMap::new())
}
