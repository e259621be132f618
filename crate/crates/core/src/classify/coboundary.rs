//! Coboundary classes: orbits whose r-matrices differ by an automorphism and
//! an invariant bivector, so that they define equivalent cocommutators.
//!
//! Merges are certified by links `(Λ²T) rep(from) + s ∈ locus(to)` with `T` a
//! displayed automorphism and `s` invariant; a class is witnessed when its
//! members are connected by verified links.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use super::{bivector, coords_of, orbit_records, OrbitRecord};
use crate::darboux::sample::{sample_locus, GRID_CAP, GRID_RANGE};
use crate::darboux::{fmt_point, locus_contains, TreeBranch};
use crate::data;
use crate::derivations::{derivation_basis, orbit_dim_with};
use crate::error::{Error, Result};
use crate::exactmath::{fmt_q, parse_q, qi, RatMatrix, Q};
use crate::grassmann::{invariants, MultiVector};
use crate::liealg::catalog::{all_samples, catalog, CatalogId, Family};
use crate::liealg::LieAlgebra;
use crate::parse::{at_line, strip_comment, Expr, Guard};
use crate::yangbaxter::{
    check_automorphism, is_invariant, is_mcybe_solution, quotient_class, rr, same_coboundary,
    transform, yb_system,
};

pub const AUTOMORPHISMS: &str = "orbits/automorphisms.txt";
pub const CLASSES: &str = "orbits/classes.txt";

/// Sign symbols of the displayed automorphisms.
const SIGNS: [&str; 4] = ["l", "l1", "l2", "l3"];

/// A displayed automorphism with sign symbols and family parameters.
#[derive(Clone, Debug)]
pub struct Automorphism {
    pub line: usize,
    pub family: Family,
    pub name: String,
    pub guard: Guard,
    pub entries: Vec<Vec<Expr>>,
}

impl Automorphism {
    /// Sign symbols used by the matrix, in [`SIGNS`] order.
    pub fn signs(&self) -> Vec<&'static str> {
        let used: BTreeSet<String> = self
            .entries
            .iter()
            .flatten()
            .flat_map(|e| e.symbols())
            .collect();
        SIGNS.into_iter().filter(|s| used.contains(*s)).collect()
    }

    /// Every assignment of `±1` to the sign symbols.
    pub fn sign_choices(&self) -> Vec<BTreeMap<String, Q>> {
        let signs = self.signs();
        (0..1usize << signs.len())
            .map(|m| {
                signs
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.to_string(), qi(if m >> i & 1 == 1 { -1 } else { 1 })))
                    .collect()
            })
            .collect()
    }

    pub fn matrix(&self, id: &CatalogId, signs: &BTreeMap<String, Q>) -> Result<RatMatrix> {
        let resolve = |s: &str| {
            signs
                .get(s)
                .or_else(|| id.param(s))
                .cloned()
                .map(crate::exactmath::Poly::constant)
        };
        let mut rows = Vec::new();
        for row in &self.entries {
            let mut out = Vec::new();
            for e in row {
                let p = at_line(e.eval(&resolve), self.line)?;
                if p.degree().is_some_and(|d| d > 0) {
                    return Err(Error::parse(self.line, format!("unbound symbol in {}", p)));
                }
                out.push(p.constant_term());
            }
            rows.push(out);
        }
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::parse(self.line, "automorphism matrix is not square"));
        }
        Ok(RatMatrix::from_rows(&rows, n))
    }
}

/// `id` or `name(l1=..., ...)`.
#[derive(Clone, Debug, PartialEq)]
pub enum AutRef {
    Identity,
    Named {
        name: String,
        signs: BTreeMap<String, Q>,
    },
}

impl AutRef {
    fn parse(s: &str) -> Result<AutRef> {
        let s = s.trim();
        if s == "id" {
            return Ok(AutRef::Identity);
        }
        let (name, rest) = s.split_once('(').unwrap_or((s, ")"));
        let args = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::parse(0, format!("bad automorphism {s:?}")))?;
        let mut signs = BTreeMap::new();
        for a in args.split(',').filter(|a| !a.trim().is_empty()) {
            let (k, v) = a
                .split_once('=')
                .ok_or_else(|| Error::parse(0, format!("bad binding {a:?}")))?;
            signs.insert(k.trim().to_string(), parse_q(v.trim())?);
        }
        Ok(AutRef::Named {
            name: name.trim().to_string(),
            signs,
        })
    }
}

impl fmt::Display for AutRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutRef::Identity => write!(f, "id"),
            AutRef::Named { name, signs } => {
                let args: Vec<String> = signs
                    .iter()
                    .map(|(k, v)| format!("{k}={}", fmt_q(v)))
                    .collect();
                write!(f, "{name}({})", args.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassSpec {
    pub line: usize,
    pub family: Family,
    pub guard: Guard,
    pub name: String,
    pub members: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct LinkSpec {
    pub line: usize,
    pub family: Family,
    pub guard: Guard,
    pub from: String,
    pub to: String,
    pub aut: AutRef,
    pub shift: String,
}

/// A merge asserted without a concrete automorphism.
#[derive(Clone, Debug)]
pub struct Unwitnessed {
    pub family: Family,
    pub guard: Guard,
    pub label: String,
    pub note: String,
}

#[derive(Clone, Debug, Default)]
pub struct ClassData {
    pub automorphisms: Vec<Automorphism>,
    pub classes: Vec<ClassSpec>,
    pub links: Vec<LinkSpec>,
    pub unwitnessed: Vec<Unwitnessed>,
    pub errata: Vec<ClassErratum>,
}

/// A printed class statement that the computation contradicts.
#[derive(Clone, Debug)]
pub struct ClassErratum {
    pub family: Family,
    pub guard: Guard,
    pub note: String,
}

fn fields(line: &str, n: usize, ln: usize) -> Result<Vec<&str>> {
    let f: Vec<&str> = line.splitn(n, '|').map(str::trim).collect();
    if f.len() != n {
        return Err(Error::parse(
            ln,
            format!("expected {n} `|`-separated fields"),
        ));
    }
    Ok(f)
}

pub fn parse_automorphisms(text: &str) -> Result<Vec<Automorphism>> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let f = fields(line, 4, ln)?;
        let mut entries = Vec::new();
        for row in f[3].split(';') {
            let r: Result<Vec<Expr>> = row.split(',').map(|e| Expr::parse(e.trim())).collect();
            entries.push(at_line(r, ln)?);
        }
        out.push(Automorphism {
            line: ln,
            family: at_line(f[0].parse(), ln)?,
            name: f[1].to_string(),
            guard: at_line(Guard::parse(f[2]), ln)?,
            entries,
        });
    }
    Ok(out)
}

pub fn parse_classes(text: &str) -> Result<ClassData> {
    let mut out = ClassData::default();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (kind, _) = line
            .split_once('|')
            .ok_or_else(|| Error::parse(ln, "expected `kind | ...`"))?;
        match kind.trim() {
            "class" => {
                let f = fields(line, 5, ln)?;
                out.classes.push(ClassSpec {
                    line: ln,
                    family: at_line(f[1].parse(), ln)?,
                    guard: at_line(Guard::parse(f[2]), ln)?,
                    name: f[3].to_string(),
                    members: f[4].split(',').map(|m| m.trim().to_string()).collect(),
                });
            }
            "link" => {
                let f = fields(line, 6, ln)?;
                let (from, to) = f[3]
                    .split_once("->")
                    .ok_or_else(|| Error::parse(ln, "expected `from -> to`"))?;
                out.links.push(LinkSpec {
                    line: ln,
                    family: at_line(f[1].parse(), ln)?,
                    guard: at_line(Guard::parse(f[2]), ln)?,
                    from: from.trim().to_string(),
                    to: to.trim().to_string(),
                    aut: at_line(AutRef::parse(f[4]), ln)?,
                    shift: f[5].to_string(),
                });
            }
            "unwitnessed" => {
                let f = fields(line, 5, ln)?;
                out.unwitnessed.push(Unwitnessed {
                    family: at_line(f[1].parse(), ln)?,
                    guard: at_line(Guard::parse(f[2]), ln)?,
                    label: f[3].to_string(),
                    note: f[4].to_string(),
                });
            }
            "erratum" => {
                let f = fields(line, 4, ln)?;
                out.errata.push(ClassErratum {
                    family: at_line(f[1].parse(), ln)?,
                    guard: at_line(Guard::parse(f[2]), ln)?,
                    note: f[3].to_string(),
                });
            }
            k => return Err(Error::parse(ln, format!("unknown line kind {k:?}"))),
        }
    }
    Ok(out)
}

pub fn load_class_data() -> Result<ClassData> {
    let automorphisms = parse_automorphisms(&data::read(AUTOMORPHISMS)?)?;
    Ok(ClassData {
        automorphisms,
        ..parse_classes(&data::read(CLASSES)?)?
    })
}

/// Whether `Λ²T r_from` lands in the locus of `target`, after checking that
/// `T` is an automorphism.
pub fn verify_automorphism_witness(
    g: &LieAlgebra,
    t: &RatMatrix,
    r_from: &MultiVector,
    target: &TreeBranch,
) -> Result<bool> {
    check_automorphism(g, t)?;
    let image = transform(t, r_from)?;
    Ok(locus_contains(
        target,
        &coords_of(&image, t.rows() * (t.rows() - 1) / 2),
    ))
}

/// Exact bracket check of every displayed automorphism at every sign choice
/// and every qualifying catalog sample; returns the failures.
pub fn check_automorphisms(data: &ClassData) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    for a in &data.automorphisms {
        for id in all_samples().into_iter().filter(|id| id.family == a.family) {
            if !a.guard.holds(&id.params)? {
                continue;
            }
            let g = catalog(&id)?;
            for signs in a.sign_choices() {
                if let Err(e) = check_automorphism(&g, &a.matrix(&id, &signs)?) {
                    bad.push(format!("{id} {}{signs:?}: {e}", a.name));
                }
            }
        }
    }
    Ok(bad)
}

#[derive(Clone, Debug)]
pub struct LinkOutcome {
    pub line: usize,
    pub from: String,
    pub to: String,
    pub aut: AutRef,
    pub shift: String,
    pub failure: Option<String>,
}

impl fmt::Display for LinkOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} via {} + {}",
            self.from, self.to, self.aut, self.shift
        )?;
        match &self.failure {
            None => write!(f, ": ok"),
            Some(why) => write!(f, ": FAILED {why}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassOutcome {
    pub name: String,
    pub members: Vec<String>,
    /// Members not reached from the first one by verified links.
    pub unreached: Vec<String>,
}

impl ClassOutcome {
    pub fn witnessed(&self) -> bool {
        self.unreached.is_empty()
    }
}

/// Coboundary-class verification at one algebra.
#[derive(Clone, Debug)]
pub struct CoboundaryReport {
    pub algebra: CatalogId,
    pub classes: Vec<ClassOutcome>,
    pub links: Vec<LinkOutcome>,
    /// Inconsistencies between the class list and the orbit table.
    pub problems: Vec<String>,
    /// Cross-class pairs with a separation certificate, and its reason.
    pub separated: Vec<(String, String, String)>,
    /// Cross-class pairs the necessary conditions cannot tell apart.
    pub uncertified: Vec<(String, String)>,
    pub unwitnessed: Vec<Unwitnessed>,
    pub errata: Vec<ClassErratum>,
}

impl CoboundaryReport {
    pub fn passed(&self) -> bool {
        self.problems.is_empty()
            && self.links.iter().all(|l| l.failure.is_none())
            && self.classes.iter().all(ClassOutcome::witnessed)
    }
}

fn find<'a>(records: &'a [OrbitRecord], label: &str) -> Option<&'a OrbitRecord> {
    records.iter().find(|r| r.label == label)
}

fn check_link(
    g: &LieAlgebra,
    id: &CatalogId,
    data: &ClassData,
    records: &[OrbitRecord],
    link: &LinkSpec,
) -> Result<Option<String>> {
    let (Some(from), Some(to)) = (find(records, &link.from), find(records, &link.to)) else {
        return Ok(Some("link names a row that does not apply".into()));
    };
    let t = match &link.aut {
        AutRef::Identity => RatMatrix::identity(g.dim()),
        AutRef::Named { name, signs } => {
            let Some(a) = data
                .automorphisms
                .iter()
                .find(|a| a.family == id.family && &a.name == name)
            else {
                return Ok(Some(format!("unknown automorphism {name:?}")));
            };
            a.matrix(id, signs)?
        }
    };
    if let Err(e) = check_automorphism(g, &t) {
        return Ok(Some(e.to_string()));
    }
    let shift = at_line(
        bivector(g.dim(), &link.shift, &|s| id.param(s).cloned()),
        link.line,
    )?;
    if !is_invariant(g, &shift)? {
        return Ok(Some(format!("shift {} is not invariant", link.shift)));
    }
    let image = transform(&t, &from.rep)?.add(&shift)?;
    let n = g.dim() * (g.dim() - 1) / 2;
    let x = coords_of(&image, n);
    if !locus_contains(&to.constraints, &x) {
        return Ok(Some(format!(
            "image {} outside the locus of {}",
            fmt_point(&x),
            link.to
        )));
    }
    if !is_mcybe_solution(g, &image)? {
        return Ok(Some("image does not solve the mCYBE".into()));
    }
    if !same_coboundary(g, &from.rep, &image, &t)? {
        return Ok(Some("quotient classes differ".into()));
    }
    Ok(None)
}

/// The printed representative, or a sampled point of the row when the
/// printed one lies outside it.
fn in_locus_rep(
    g: &LieAlgebra,
    r: &OrbitRecord,
    mcybe: &[crate::exactmath::Poly],
) -> Result<MultiVector> {
    let n = g.dim() * (g.dim() - 1) / 2;
    if locus_contains(&r.constraints, &coords_of(&r.rep, n)) {
        return Ok(r.rep.clone());
    }
    match sample_locus(&r.constraints, mcybe, n, GRID_RANGE, GRID_CAP).first() {
        Some(p) => MultiVector::from_coords(g.dim(), 2, p),
        None => Ok(r.rep.clone()),
    }
}

/// Checks the coboundary classes of the table of `id.family` at `id`.
pub fn verify_coboundary_classes(id: &CatalogId, data: &ClassData) -> Result<CoboundaryReport> {
    let g = catalog(id)?;
    let records = orbit_records(id)?;
    let mut labels: Vec<String> = Vec::new();
    for r in &records {
        if !labels.contains(&r.label) {
            labels.push(r.label.clone());
        }
    }
    let applies = |f: Family, guard: &Guard| -> Result<bool> {
        Ok(f == id.family && guard.holds(&id.params)?)
    };
    let mut specs = Vec::new();
    for c in &data.classes {
        if applies(c.family, &c.guard)? {
            specs.push(c.clone());
        }
    }
    let mut problems = Vec::new();
    if specs.is_empty() {
        if !records.is_empty() && !invariants(&g, 2).is_empty() {
            problems.push("invariant bivectors exist but no class list is given".into());
        }
        specs = labels
            .iter()
            .map(|l| ClassSpec {
                line: 0,
                family: id.family,
                guard: Guard::always(),
                name: l.clone(),
                members: vec![l.clone()],
            })
            .collect();
    } else {
        let listed: Vec<&String> = specs.iter().flat_map(|c| &c.members).collect();
        let listed_set: BTreeSet<&String> = listed.iter().copied().collect();
        if listed.len() != listed_set.len() {
            problems.push("a row appears in two classes".into());
        }
        for l in &labels {
            if !listed_set.contains(l) {
                problems.push(format!("row {l} is in no class"));
            }
        }
        for l in listed_set {
            if !labels.contains(l) {
                problems.push(format!("class member {l} is not a row here"));
            }
        }
    }

    let mut links = Vec::new();
    for link in &data.links {
        if applies(link.family, &link.guard)? {
            links.push(LinkOutcome {
                line: link.line,
                from: link.from.clone(),
                to: link.to.clone(),
                aut: link.aut.clone(),
                shift: link.shift.clone(),
                failure: check_link(&g, id, data, &records, link)?,
            });
        }
    }

    let classes: Vec<ClassOutcome> = specs
        .iter()
        .map(|c| {
            let mut reached: BTreeSet<&str> =
                c.members.first().map(|m| m.as_str()).into_iter().collect();
            loop {
                let before = reached.len();
                for l in links.iter().filter(|l| l.failure.is_none()) {
                    if reached.contains(l.from.as_str()) && c.members.contains(&l.to) {
                        reached.insert(&l.to);
                    }
                    if reached.contains(l.to.as_str()) && c.members.contains(&l.from) {
                        reached.insert(&l.from);
                    }
                }
                if reached.len() == before {
                    break;
                }
            }
            ClassOutcome {
                name: c.name.clone(),
                members: c.members.clone(),
                unreached: c
                    .members
                    .iter()
                    .filter(|m| !reached.contains(m.as_str()))
                    .cloned()
                    .collect(),
            }
        })
        .collect();
    for l in links.iter().filter(|l| l.failure.is_none()) {
        let same = classes
            .iter()
            .any(|c| c.members.contains(&l.from) && c.members.contains(&l.to));
        if !same {
            problems.push(format!(
                "link {} -> {} joins different classes",
                l.from, l.to
            ));
        }
    }

    // Representatives of distinct classes must differ in Λ²_R g, and [r, r]
    // (unchanged by invariant shifts) may separate them.
    let ds = derivation_basis(&g);
    let mcybe = yb_system(&g).mcybe;
    let mut reps: Vec<(&str, MultiVector)> = Vec::new();
    for c in &classes {
        if let Some(r) = c.members.first().and_then(|m| find(&records, m)) {
            reps.push((c.name.as_str(), in_locus_rep(&g, r, &mcybe)?));
        }
    }
    let mut separated = Vec::new();
    let mut uncertified = Vec::new();
    let profile = |r: &MultiVector| -> Result<(bool, usize)> {
        let w = rr(&g, r)?;
        Ok(if w.is_zero() {
            (true, 0)
        } else {
            (false, orbit_dim_with(&ds, &w))
        })
    };
    for (i, (a, ra)) in reps.iter().enumerate() {
        for (b, rb) in &reps[i + 1..] {
            let (ra, rb) = (&ra, &rb);
            if quotient_class(&g, ra)?.coords == quotient_class(&g, rb)?.coords {
                problems.push(format!(
                    "classes {a} and {b} share a representative modulo invariants"
                ));
            }
            let (pa, pb) = (profile(ra)?, profile(rb)?);
            if pa.0 != pb.0 {
                separated.push((
                    a.to_string(),
                    b.to_string(),
                    "exactly one [r, r] vanishes".into(),
                ));
            } else if pa.1 != pb.1 {
                separated.push((
                    a.to_string(),
                    b.to_string(),
                    format!("[r, r] orbit dimensions {} and {}", pa.1, pb.1),
                ));
            } else {
                uncertified.push((a.to_string(), b.to_string()));
            }
        }
    }

    let mut unwitnessed = Vec::new();
    for u in &data.unwitnessed {
        if applies(u.family, &u.guard)? && labels.contains(&u.label) {
            unwitnessed.push(u.clone());
        }
    }
    let mut errata = Vec::new();
    for e in &data.errata {
        if applies(e.family, &e.guard)? {
            errata.push(e.clone());
        }
    }
    Ok(CoboundaryReport {
        algebra: id.clone(),
        classes,
        links,
        problems,
        separated,
        uncertified,
        unwitnessed,
        errata,
    })
}

/// [`verify_coboundary_classes`] at every catalog sample.
pub fn verify_all_classes() -> Result<Vec<CoboundaryReport>> {
    let data = load_class_data()?;
    all_samples()
        .par_iter()
        .map(|id| verify_coboundary_classes(id, &data))
        .collect()
}
