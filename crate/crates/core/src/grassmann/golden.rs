//! Golden Schouten tables: `family | a | b | [a, b]` per line, with the
//! entries written as in the published tables (parameters `alpha`, `beta`).

use std::collections::BTreeMap;

use crate::data;
use crate::error::{Error, Result};
use crate::exactmath::rank_of;
use crate::exactmath::Q;
use crate::liealg::catalog::{catalog, CatalogId, Family};
use crate::parse::{at_line, strip_comment, Guard};

use super::{MultiVec, MultiVector};

/// The three shipped tables.
pub const TABLES: [&str; 3] = [
    "schouten/g_l2.txt",
    "schouten/l2_l2.txt",
    "schouten/g_l3.txt",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchoutenEntry {
    pub table: String,
    pub line: usize,
    pub family: Family,
    pub a: String,
    pub b: String,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchoutenMismatch {
    pub entry: SchoutenEntry,
    pub algebra: CatalogId,
    pub computed: String,
}

#[derive(Clone, Debug, Default)]
pub struct SchoutenReport {
    /// Entries read from the tables.
    pub entries: usize,
    /// Entry evaluations performed (entries × parameter samples).
    pub checks: usize,
    pub mismatches: Vec<SchoutenMismatch>,
}

pub fn load_table(name: &str) -> Result<Vec<SchoutenEntry>> {
    let text = data::read(name)?;
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('|').map(str::trim).collect();
        if f.len() != 4 {
            return Err(Error::parse(ln + 1, "expected `family | a | b | value`"));
        }
        out.push(SchoutenEntry {
            table: name.to_string(),
            line: ln + 1,
            family: f[0].parse()?,
            a: f[1].to_string(),
            b: f[2].to_string(),
            expected: f[3].to_string(),
        });
    }
    Ok(out)
}

/// Recomputes every table entry at every sample parameter of its family.
pub fn check_tables() -> Result<SchoutenReport> {
    let mut rep = SchoutenReport::default();
    for t in TABLES {
        let entries = load_table(t)?;
        rep.entries += entries.len();
        let mut by_family: BTreeMap<Family, Vec<&SchoutenEntry>> = BTreeMap::new();
        for e in &entries {
            by_family.entry(e.family).or_default().push(e);
        }
        for (fam, es) in by_family {
            for params in fam.samples() {
                let id = CatalogId::new(fam, params.clone());
                let g = catalog(&id)?;
                let lookup = |s: &str| params.get(s).cloned();
                for e in &es {
                    rep.checks += 1;
                    let a = MultiVector::parse(4, &e.a, &lookup)?;
                    let b = MultiVector::parse(4, &e.b, &lookup)?;
                    let got = MultiVec::schouten(&g, &a, &b)?;
                    let want = parse_value(&e.expected, got.degree(), &lookup)?;
                    if got != want {
                        rep.mismatches.push(SchoutenMismatch {
                            entry: (*e).clone(),
                            algebra: id.clone(),
                            computed: got.to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(rep)
}

fn parse_value(s: &str, degree: usize, lookup: &dyn Fn(&str) -> Option<Q>) -> Result<MultiVector> {
    let mut v = MultiVector::parse(4, s, lookup)?;
    if v.is_zero() {
        v = MultiVec::zero(4, degree);
    }
    Ok(v)
}

/// A documented printed-table error with its corrected value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Erratum {
    pub table: String,
    pub line: usize,
    pub family: Family,
    pub a: String,
    pub b: String,
    pub corrected: String,
    pub note: String,
}

pub fn load_errata() -> Result<Vec<Erratum>> {
    let text = data::read("schouten/errata.txt")?;
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.splitn(7, '|').map(str::trim).collect();
        if f.len() != 7 {
            return Err(Error::parse(ln + 1, "expected 7 fields"));
        }
        out.push(Erratum {
            table: format!("schouten/{}", f[0]),
            line: f[1]
                .parse()
                .map_err(|_| Error::parse(ln + 1, "bad line number"))?,
            family: f[2].parse()?,
            a: f[3].to_string(),
            b: f[4].to_string(),
            corrected: f[5].to_string(),
            note: f[6].to_string(),
        });
    }
    Ok(out)
}

impl SchoutenReport {
    /// Mismatches not covered by a documented erratum.
    pub fn undocumented(&self, errata: &[Erratum]) -> Vec<&SchoutenMismatch> {
        self.mismatches
            .iter()
            .filter(|m| {
                !errata
                    .iter()
                    .any(|e| e.table == m.entry.table && e.line == m.entry.line)
            })
            .collect()
    }
}

/// Checks that the engine reproduces every corrected value at every sample.
pub fn check_errata(errata: &[Erratum]) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    for e in errata {
        for params in e.family.samples() {
            let id = CatalogId::new(e.family, params.clone());
            let g = catalog(&id)?;
            let lookup = |s: &str| params.get(s).cloned();
            let a = MultiVector::parse(4, &e.a, &lookup)?;
            let b = MultiVector::parse(4, &e.b, &lookup)?;
            let got = MultiVec::schouten(&g, &a, &b)?;
            if got != parse_value(&e.corrected, got.degree(), &lookup)? {
                bad.push(format!(
                    "{id} [{}, {}]: corrected {} but computed {got}",
                    e.a, e.b, e.corrected
                ));
            }
        }
    }
    Ok(bad)
}

/// Stated invariant multivectors: `family | guard | degree | basis`.
#[derive(Clone, Debug)]
pub struct InvariantStatement {
    pub line: usize,
    pub family: Family,
    pub guard: Guard,
    pub degree: usize,
    pub basis: Vec<String>,
}

pub fn load_invariants() -> Result<Vec<InvariantStatement>> {
    let text = data::read("invariants.txt")?;
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('|').map(str::trim).collect();
        if f.len() != 4 {
            return Err(Error::parse(
                ln + 1,
                "expected `family | guard | degree | basis`",
            ));
        }
        let basis = if f[3] == "0" {
            Vec::new()
        } else {
            f[3].split(',').map(|s| s.trim().to_string()).collect()
        };
        out.push(InvariantStatement {
            line: ln + 1,
            family: at_line(f[0].parse(), ln + 1)?,
            guard: at_line(Guard::parse(f[1]), ln + 1)?,
            degree: f[2]
                .parse()
                .map_err(|_| Error::parse(ln + 1, "bad degree"))?,
            basis,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct InvariantCheck {
    pub algebra: CatalogId,
    pub degree: usize,
    pub expected: Vec<String>,
    pub computed: Vec<String>,
    pub ok: bool,
}

/// Compares the computed invariant spaces in degrees 2 and 3 with the
/// statements at every parameter sample.
pub fn check_invariants() -> Result<Vec<InvariantCheck>> {
    let stmts = load_invariants()?;
    let mut out = Vec::new();
    for fam in Family::ALL {
        for params in fam.samples() {
            let id = CatalogId::new(fam, params.clone());
            let g = catalog(&id)?;
            let lookup = |s: &str| params.get(s).cloned();
            for degree in [2, 3] {
                let mut covered = false;
                let mut expected = Vec::new();
                for s in stmts
                    .iter()
                    .filter(|s| s.family == fam && s.degree == degree)
                {
                    if s.guard.holds(&params)? {
                        covered = true;
                        for b in &s.basis {
                            expected.push(at_line(MultiVector::parse(4, b, &lookup), s.line)?);
                        }
                    }
                }
                let computed = super::invariants(&g, degree);
                let size = super::Blade::all(4, degree).len();
                let rows = |vs: &[MultiVector]| vs.iter().map(|v| v.coords()).collect::<Vec<_>>();
                let (re, rc) = (
                    rank_of(&rows(&expected), size),
                    rank_of(&rows(&computed), size),
                );
                let both: Vec<MultiVector> = expected.iter().chain(&computed).cloned().collect();
                let ok = covered
                    && expected.iter().all(|v| v.degree() == degree)
                    && re == expected.len()
                    && re == rc
                    && rank_of(&rows(&both), size) == re;
                out.push(InvariantCheck {
                    algebra: id.clone(),
                    degree,
                    expected: if covered {
                        expected.iter().map(|v| v.to_string()).collect()
                    } else {
                        vec!["(no statement applies)".into()]
                    },
                    computed: computed.iter().map(|v| v.to_string()).collect(),
                    ok,
                });
            }
        }
    }
    Ok(out)
}
