//! Resolving `--algebra` and `--param` into something to compute on.

use std::collections::BTreeMap;
use std::path::Path;

use darbouxlie::liealg::catalog::extra;
use darbouxlie::liealg::AlgebraText;
use darbouxlie::{catalog, CatalogId, Family, LieAlgebra, Q};

use crate::Failure;

pub enum Target {
    /// Every shipped algebra or every catalog sample, depending on the verb.
    All,
    /// A parameterized family given without parameter values.
    Family(Family),
    /// A file whose parameters are left unbound.
    Symbolic(AlgebraText),
    Algebra {
        g: LieAlgebra,
        id: Option<CatalogId>,
    },
}

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

pub fn resolve(spec: Option<&str>, bindings: &[(String, Q)]) -> Result<Target, Failure> {
    let spec = spec.ok_or_else(|| input("missing --algebra"))?.trim();
    let mut params = BTreeMap::new();
    for (k, v) in bindings {
        if params.insert(k.clone(), v.clone()).is_some() {
            return Err(input(format!("parameter {k} given twice")));
        }
    }
    if spec == "all" {
        if !params.is_empty() {
            return Err(input("--param cannot be combined with --algebra all"));
        }
        return Ok(Target::All);
    }
    let path = Path::new(spec);
    if path.is_file() || spec.ends_with(".alg") {
        let text = std::fs::read_to_string(path).map_err(|e| input(format!("{spec}: {e}")))?;
        let parsed = AlgebraText::parse(&text)?;
        if params.is_empty() && !parsed.params.is_empty() {
            return Ok(Target::Symbolic(parsed));
        }
        return Ok(Target::Algebra {
            g: parsed.instantiate(&params)?,
            id: None,
        });
    }
    let mut id = match CatalogId::parse(spec) {
        Ok(id) => id,
        Err(_) => {
            if !params.is_empty() {
                return Err(input(format!("{spec} takes no parameters")));
            }
            let g = extra(spec)?;
            return Ok(Target::Algebra { g, id: None });
        }
    };
    for (k, v) in params {
        if id.params.insert(k.clone(), v).is_some() {
            return Err(input(format!("parameter {k} given twice")));
        }
    }
    if id.params.is_empty() && !id.family.param_names().is_empty() {
        return Ok(Target::Family(id.family));
    }
    let g = catalog(&id)?;
    Ok(Target::Algebra { g, id: Some(id) })
}

/// Parameter names and sample values, for messages about missing bindings.
pub fn needs_params(f: Family) -> Failure {
    let names: Vec<String> = f
        .param_names()
        .iter()
        .map(|p| format!("--param {p}=..."))
        .collect();
    let samples: Vec<String> = f
        .samples()
        .into_iter()
        .map(|p| CatalogId::new(f, p).to_string())
        .collect();
    input(format!(
        "{f} needs {} (catalog samples: {})",
        names.join(" "),
        samples.join(", ")
    ))
}

impl Target {
    /// The single algebra this verb operates on.
    pub fn single(self) -> Result<(LieAlgebra, Option<CatalogId>), Failure> {
        match self {
            Target::Algebra { g, id } => Ok((g, id)),
            Target::Family(f) => Err(needs_params(f)),
            Target::Symbolic(t) => {
                Err(input(format!("{} needs values for {}", t.name, t.params.join(", "))))
            }
            Target::All => Err(input(
                "`all` is accepted by validate, darboux-verify, verify-tables and coboundary-classes only",
            )),
        }
    }

    /// Catalog samples covered by a table verb.
    pub fn samples(&self) -> Result<Vec<CatalogId>, Failure> {
        match self {
            Target::All => Ok(darbouxlie::liealg::catalog::all_samples()),
            Target::Family(f) => Ok(f
                .samples()
                .into_iter()
                .map(|p| CatalogId::new(*f, p))
                .collect()),
            Target::Algebra { id: Some(id), .. } => Ok(vec![id.clone()]),
            Target::Algebra { g, id: None } => Err(input(format!(
                "{g} is not a catalog family; the golden tables cover s1..s12 and n1"
            ))),
            Target::Symbolic(t) => Err(input(format!("{} is not a catalog family", t.name))),
        }
    }
}
