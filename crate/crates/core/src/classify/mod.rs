//! Orbit tables: representatives, dimensions, mCYBE/CYBE status and star
//! marks, checked row by row at every qualifying parameter sample.
//!
//! An orbit file starts with `family = ...` and groups rows under
//! `case = <guard>` lines. A row reads
//!
//! ```text
//! label | guard | dim | star | representative | constraints [| k = ...]
//! ```
//!
//! with `star` one of `yes`, `no` or `when <guard>`, and the representative
//! `none` when the table prints none (a point of the stratum is sampled).

pub mod coboundary;

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::darboux::sample::{sample_locus, GRID_CAP, GRID_RANGE};
use crate::darboux::{fmt_point, locus_contains, TreeBranch};
use crate::data;
use crate::derivations::{field_rank_at, fundamental_fields, orbit_dim};
use crate::error::{Error, Result};
use crate::exactmath::{fmt_q, parse_q, Poly, Q};
use crate::grassmann::MultiVector;
use crate::liealg::catalog::{catalog, CatalogId, Family};
use crate::parse::{at_line, coord_index, parse_atom, split_top, strip_comment, Expr, Guard, Rel};
use crate::yangbaxter::{is_cybe_solution, is_mcybe_solution, yb_system};

pub const ERRATA: &str = "orbits/errata.txt";

pub fn orbit_file(family: Family) -> String {
    format!("orbits/{}.txt", family.name())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Star {
    Yes,
    No,
    When(Guard),
}

impl Star {
    pub fn holds(&self, id: &CatalogId) -> Result<bool> {
        match self {
            Star::Yes => Ok(true),
            Star::No => Ok(false),
            Star::When(g) => g.holds(&id.params),
        }
    }
}

/// One printed row of an orbit table.
#[derive(Clone, Debug)]
pub struct OrbitRow {
    pub line: usize,
    pub family: Family,
    pub case: Guard,
    pub guard: Guard,
    pub label: String,
    pub dim: usize,
    pub star: Star,
    pub rep: Option<String>,
    pub constraints: Vec<(Expr, Rel)>,
    pub ks: Vec<Q>,
}

impl OrbitRow {
    pub fn applies(&self, id: &CatalogId) -> Result<bool> {
        Ok(id.family == self.family
            && self.case.holds(&id.params)?
            && self.guard.holds(&id.params)?)
    }

    /// The label without a trailing `+`/`-`.
    pub fn base_label(&self) -> &str {
        self.label.trim_end_matches(['+', '-'])
    }

    pub fn branch(&self, id: &CatalogId, k: Option<&Q>) -> Result<TreeBranch> {
        let mut b = TreeBranch {
            label: self.label.clone(),
            ..Default::default()
        };
        for (e, rel) in &self.constraints {
            let p = at_line(
                e.eval(&|s| symbol(s, id, k).or_else(|| coord_index(s, 'x').map(Poly::var))),
                self.line,
            )?;
            b.push(p, *rel);
        }
        Ok(b)
    }

    /// The printed representative, if any.
    pub fn representative(&self, id: &CatalogId, k: Option<&Q>) -> Result<Option<MultiVector>> {
        let Some(text) = &self.rep else {
            return Ok(None);
        };
        let dim = catalog(id)?.dim();
        let w = at_line(
            bivector(dim, text, &|s| symbol(s, id, k).map(|p| p.constant_term())),
            self.line,
        )?;
        Ok(Some(w))
    }
}

/// Parses a bivector expression; `0` gives the zero bivector.
pub(crate) fn bivector(
    dim: usize,
    text: &str,
    params: &dyn Fn(&str) -> Option<Q>,
) -> Result<MultiVector> {
    let w = MultiVector::parse(dim, text, params)?;
    if w.is_zero() {
        return Ok(MultiVector::zero(dim, 2));
    }
    if w.degree() != 2 {
        return Err(Error::parse(0, format!("{text:?} is not a bivector")));
    }
    Ok(w)
}

fn symbol(s: &str, id: &CatalogId, k: Option<&Q>) -> Option<Poly> {
    if s == "k" {
        return k.cloned().map(Poly::constant);
    }
    id.param(s).cloned().map(Poly::constant)
}

pub fn parse_orbit_file(text: &str) -> Result<Vec<OrbitRow>> {
    let mut family = None;
    let mut case = Guard::always();
    let mut rows = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if !line.contains('|') {
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::parse(
                    ln,
                    format!("expected a header or a row: {line:?}"),
                ));
            };
            match key.trim() {
                "family" => family = Some(at_line(value.trim().parse::<Family>(), ln)?),
                "case" => case = at_line(Guard::parse(value), ln)?,
                k => return Err(Error::parse(ln, format!("unknown header {k:?}"))),
            }
            continue;
        }
        let family = family.ok_or_else(|| Error::parse(ln, "row before `family =`"))?;
        rows.push(at_line(parse_row(line, family, &case), ln).map(|mut r| {
            r.line = ln;
            r
        })?);
    }
    Ok(rows)
}

fn parse_row(line: &str, family: Family, case: &Guard) -> Result<OrbitRow> {
    let f: Vec<&str> = line.split('|').map(str::trim).collect();
    if !(6..=7).contains(&f.len()) {
        return Err(Error::parse(
            0,
            "expected `label | guard | dim | star | rep | constraints [| k = ...]`",
        ));
    }
    let dim = f[2]
        .parse()
        .map_err(|_| Error::parse(0, format!("bad dimension {:?}", f[2])))?;
    let star = match f[3] {
        "yes" => Star::Yes,
        "no" => Star::No,
        s => match s.strip_prefix("when ") {
            Some(g) => Star::When(Guard::parse(g)?),
            None => return Err(Error::parse(0, format!("bad star {s:?}"))),
        },
    };
    let mut constraints = Vec::new();
    for atom in split_top(f[5], ',') {
        if !atom.trim().is_empty() {
            constraints.push(parse_atom(atom.trim())?);
        }
    }
    let mut ks = Vec::new();
    if let Some(k) = f.get(6) {
        let list = k
            .strip_prefix('k')
            .and_then(|s| s.trim_start().strip_prefix('='))
            .ok_or_else(|| Error::parse(0, format!("expected `k = ...`, got {k:?}")))?;
        for v in list.split(',') {
            ks.push(parse_q(v.trim())?);
        }
    }
    Ok(OrbitRow {
        line: 0,
        family,
        case: case.clone(),
        guard: Guard::parse(f[1])?,
        label: f[0].to_string(),
        dim,
        star,
        rep: (f[4] != "none").then(|| f[4].to_string()),
        constraints,
        ks,
    })
}

pub fn load_orbit_rows(family: Family) -> Result<Vec<OrbitRow>> {
    parse_orbit_file(&data::read(&orbit_file(family))?)
}

/// A row instantiated at one algebra (and one `k`).
#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub algebra: CatalogId,
    pub line: usize,
    pub label: String,
    pub k: Option<Q>,
    pub rep: MultiVector,
    /// Whether the representative was sampled from the constraints.
    pub sampled_rep: bool,
    pub dim: usize,
    pub constraints: TreeBranch,
    pub star: bool,
}

/// Kinds of row checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RowCheck {
    /// The representative satisfies the row constraints.
    Locus,
    /// `orbit_dim(rep)` equals the stated dimension.
    Dim,
    /// The representative solves the mCYBE.
    Mcybe,
    /// The representative solves the CYBE exactly when it is not starred.
    Star,
    /// Sampled points of the constraint set solve the mCYBE and have field
    /// rank equal to the stated dimension.
    Stratum,
}

impl RowCheck {
    pub const ALL: [RowCheck; 5] = [
        RowCheck::Locus,
        RowCheck::Dim,
        RowCheck::Mcybe,
        RowCheck::Star,
        RowCheck::Stratum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RowCheck::Locus => "locus",
            RowCheck::Dim => "dim",
            RowCheck::Mcybe => "mcybe",
            RowCheck::Star => "star",
            RowCheck::Stratum => "stratum",
        }
    }
}

impl std::str::FromStr for RowCheck {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RowCheck::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::parse(0, format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct RecordResult {
    pub record: OrbitRecord,
    pub orbit_dim: usize,
    pub cybe: bool,
    pub failures: Vec<(RowCheck, String)>,
}

impl RecordResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for RecordResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.record;
        write!(f, "{} {}", r.algebra, r.label)?;
        if let Some(k) = &r.k {
            write!(f, " (k = {})", fmt_q(k))?;
        }
        write!(
            f,
            ": dim {}{}",
            self.orbit_dim,
            if r.star { ", star" } else { "" }
        )?;
        for (c, why) in &self.failures {
            write!(f, "; {} FAILED: {why}", c.name())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct OrbitReport {
    pub results: Vec<RecordResult>,
}

impl OrbitReport {
    pub fn failures(&self) -> impl Iterator<Item = (&RecordResult, RowCheck, &str)> {
        self.results
            .iter()
            .flat_map(|r| r.failures.iter().map(move |(c, why)| (r, *c, why.as_str())))
    }

    /// `(family, label, check)` of every failure.
    pub fn failure_keys(&self) -> BTreeSet<(String, String, RowCheck)> {
        self.failures()
            .map(|(r, c, _)| {
                (
                    r.record.algebra.family.name().to_string(),
                    r.record.label.clone(),
                    c,
                )
            })
            .collect()
    }
}

/// Records for `id`: one per applicable row and `k` value.
pub fn orbit_records(id: &CatalogId) -> Result<Vec<OrbitRecord>> {
    let g = catalog(id)?;
    let n = g.dim() * (g.dim() - 1) / 2;
    let mcybe = yb_system(&g).mcybe;
    let mut out = Vec::new();
    for row in load_orbit_rows(id.family)? {
        if !row.applies(id)? {
            continue;
        }
        let ks: Vec<Option<Q>> = if row.ks.is_empty() {
            vec![None]
        } else {
            row.ks.iter().cloned().map(Some).collect()
        };
        for k in ks {
            let constraints = row.branch(id, k.as_ref())?;
            let (rep, sampled_rep) = match row.representative(id, k.as_ref())? {
                Some(w) => (w, false),
                None => {
                    let pts = sample_locus(&constraints, &mcybe, n, GRID_RANGE, GRID_CAP);
                    let p = pts.first().ok_or_else(|| Error::BranchInvalid {
                        label: row.label.clone(),
                        reason: format!(
                            "no point of the stratum at {id} to serve as representative"
                        ),
                    })?;
                    (MultiVector::from_coords(g.dim(), 2, p)?, true)
                }
            };
            out.push(OrbitRecord {
                algebra: id.clone(),
                line: row.line,
                label: row.label.clone(),
                k: k.clone(),
                rep,
                sampled_rep,
                dim: row.dim,
                constraints,
                star: row.star.holds(id)?,
            });
        }
    }
    Ok(out)
}

pub(crate) fn coords_of(w: &MultiVector, n: usize) -> Vec<Q> {
    if w.is_zero() {
        vec![Q::from_integer(0.into()); n]
    } else {
        w.coords()
    }
}

/// Checks every record invariant for one record.
pub fn check_record(record: OrbitRecord) -> Result<RecordResult> {
    let g = catalog(&record.algebra)?;
    let n = g.dim() * (g.dim() - 1) / 2;
    let x = coords_of(&record.rep, n);
    let mut failures = Vec::new();
    if !locus_contains(&record.constraints, &x) {
        failures.push((
            RowCheck::Locus,
            format!("representative {} violates the constraints", fmt_point(&x)),
        ));
    }
    let od = if record.rep.is_zero() {
        0
    } else {
        orbit_dim(&g, &record.rep)?
    };
    if od != record.dim {
        failures.push((
            RowCheck::Dim,
            format!("orbit dimension {od}, stated {}", record.dim),
        ));
    }
    let zero = MultiVector::zero(g.dim(), 2);
    let rep = if record.rep.is_zero() {
        &zero
    } else {
        &record.rep
    };
    if !is_mcybe_solution(&g, rep)? {
        failures.push((
            RowCheck::Mcybe,
            "representative does not solve the mCYBE".into(),
        ));
    }
    let cybe = is_cybe_solution(&g, rep)?;
    if cybe == record.star {
        failures.push((
            RowCheck::Star,
            if record.star {
                "starred but solves the CYBE".into()
            } else {
                "unstarred but fails the CYBE".into()
            },
        ));
    }
    let mcybe = yb_system(&g).mcybe;
    let fields = fundamental_fields(&g, 2);
    let pts = sample_locus(&record.constraints, &[], n, GRID_RANGE, GRID_CAP);
    let solves = |p: &[Q]| {
        mcybe
            .iter()
            .all(|f| f.eval(p).is_ok_and(|v| v == Q::from_integer(0.into())))
    };
    if let Some(p) = pts.iter().find(|p| !solves(p)) {
        failures.push((
            RowCheck::Stratum,
            format!("stratum point {} does not solve the mCYBE", fmt_point(p)),
        ));
    } else if let Some((p, r)) = pts
        .iter()
        .map(|p| (p, field_rank_at(&fields, p)))
        .find(|(_, r)| *r != record.dim)
    {
        failures.push((
            RowCheck::Stratum,
            format!(
                "rank {r} at stratum point {}, stated {}",
                fmt_point(p),
                record.dim
            ),
        ));
    }
    Ok(RecordResult {
        record,
        orbit_dim: od,
        cybe,
        failures,
    })
}

/// Checks every row of the table of `id.family` that applies at `id`.
pub fn verify_orbit_table(id: &CatalogId) -> Result<OrbitReport> {
    let records = orbit_records(id)?;
    let results: Result<Vec<RecordResult>> = records.into_par_iter().map(check_record).collect();
    Ok(OrbitReport { results: results? })
}

/// [`verify_orbit_table`] over every catalog sample.
pub fn verify_all_tables() -> Result<OrbitReport> {
    let ids = crate::liealg::catalog::all_samples();
    let parts: Result<Vec<OrbitReport>> = ids.par_iter().map(verify_orbit_table).collect();
    Ok(OrbitReport {
        results: parts?.into_iter().flat_map(|r| r.results).collect(),
    })
}

/// A documented disagreement with a printed row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitErratum {
    pub family: Family,
    pub label: String,
    pub check: RowCheck,
    pub note: String,
}

pub fn load_orbit_errata() -> Result<Vec<OrbitErratum>> {
    let text = data::read(ERRATA)?;
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.splitn(4, '|').map(str::trim).collect();
        if f.len() != 4 {
            return Err(Error::parse(
                ln + 1,
                "expected `family | label | check | note`",
            ));
        }
        out.push(OrbitErratum {
            family: at_line(f[0].parse(), ln + 1)?,
            label: f[1].to_string(),
            check: at_line(f[2].parse(), ln + 1)?,
            note: f[3].to_string(),
        });
    }
    Ok(out)
}

pub fn errata_keys(errata: &[OrbitErratum]) -> BTreeSet<(String, String, RowCheck)> {
    errata
        .iter()
        .map(|e| (e.family.name().to_string(), e.label.clone(), e.check))
        .collect()
}

/// Printed representatives of rows labelled `label` (up to a trailing sign)
/// that apply at `id` and `k`; used as extra samples for Darboux leaves.
pub fn table_representatives(id: &CatalogId, label: &str, k: Option<&Q>) -> Vec<Vec<Q>> {
    let Ok(rows) = load_orbit_rows(id.family) else {
        return Vec::new();
    };
    let Ok(g) = catalog(id) else {
        return Vec::new();
    };
    let n = g.dim() * (g.dim() - 1) / 2;
    let mut out = Vec::new();
    for row in rows {
        if row.base_label() != label || !row.applies(id).unwrap_or(false) {
            continue;
        }
        let matches_k = match k {
            None => row.ks.is_empty(),
            Some(k) => row.ks.contains(k),
        };
        if !matches_k {
            continue;
        }
        if let Ok(Some(w)) = row.representative(id, k) {
            out.push(coords_of(&w, n));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::qi;

    #[test]
    fn parses_rows() {
        let rows = parse_orbit_file(
            "family = s7\ncase = always\n\
             IV+ | always | 3 | yes | e14 + k*e23 | x3>0, x4-k*x3=0, x5=0, x6=0 | k = 2, -2\n\
             I | always | 2 | when alpha=1 | none | x1^2+x2^2!=0\n",
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].ks, vec![qi(2), qi(-2)]);
        assert_eq!(rows[0].base_label(), "IV");
        assert!(rows[1].rep.is_none());
        let id = CatalogId::plain(Family::S7);
        let w = rows[0].representative(&id, Some(&qi(2))).unwrap().unwrap();
        assert_eq!(w.coords(), vec![qi(0), qi(0), qi(1), qi(2), qi(0), qi(0)]);
        assert!(parse_orbit_file("I | always | 1 | no | e12 | x1!=0\n").is_err());
    }

    #[test]
    fn s1_records() {
        let r = verify_orbit_table(&CatalogId::plain(Family::S1)).unwrap();
        assert_eq!(r.results.len(), 13);
        for x in &r.results {
            assert!(x.passed(), "{x}");
        }
    }
}
