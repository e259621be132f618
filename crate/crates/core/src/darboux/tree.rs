//! Darboux trees read from data files and checked leaf by leaf.
//!
//! A tree file has header lines `key = value` (`family`, `fields`, and
//! optionally `guard`) followed by leaf lines
//!
//! ```text
//! LABEL : x6=0, x5=0 | x4!=0 @ alpha=-2 ; dim=4 ; k = 2, -2
//! ```
//!
//! Conditions are atoms separated by `,` or `|`; `@` adds a parameter guard,
//! `dim` the stated orbit dimension and `k` the values substituted for the
//! symbol `k`. The label `nosol` marks a branch without mCYBE solutions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use super::sample::{sample_locus, GRID_CAP, GRID_RANGE};
use super::{
    find_bricks, fmt_point, locus_contains, verify_branch_with, verify_family, BranchReport,
    TreeBranch,
};
use crate::data;
use crate::derivations::{
    common_derivations, fields_of, fundamental_fields, generic_derivations, LinearVectorField,
};
use crate::error::{Error, Result};
use crate::exactmath::{fmt_q, parse_q, Poly, Q};
use crate::liealg::catalog::{catalog, CatalogId, Family};
use crate::parse::{at_line, parse_atom, parse_poly, split_top, strip_comment, Expr, Guard, Rel};
use crate::yangbaxter::variety::{certify_vanishing, real_closure};
use crate::yangbaxter::yb_system;

/// Tree files shipped with the crate.
pub const TREES: [&str; 15] = [
    "trees/s1.txt",
    "trees/s2.txt",
    "trees/s3.txt",
    "trees/s3_11.txt",
    "trees/s4.txt",
    "trees/s5.txt",
    "trees/s6.txt",
    "trees/s7.txt",
    "trees/s8.txt",
    "trees/s8_1.txt",
    "trees/s9.txt",
    "trees/s10.txt",
    "trees/s11.txt",
    "trees/s12.txt",
    "trees/n1.txt",
];

/// Which derivations generate the fields of a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSet {
    /// Derivations of the algebra itself.
    Own,
    /// Derivations common to every sample of the family.
    Common,
    /// Derivations depending affinely on the single family parameter.
    Generic,
}

impl std::str::FromStr for FieldSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "own" => Ok(FieldSet::Own),
            "common" => Ok(FieldSet::Common),
            "generic" => Ok(FieldSet::Generic),
            v => Err(Error::parse(0, format!("unknown field set {v:?}"))),
        }
    }
}

impl FieldSet {
    pub fn fields(self, id: &CatalogId) -> Result<Vec<LinearVectorField>> {
        Ok(match self {
            FieldSet::Own => fundamental_fields(&catalog(id)?, 2),
            FieldSet::Common => {
                let gs: Result<Vec<_>> = id
                    .family
                    .samples()
                    .into_iter()
                    .map(|p| catalog(&CatalogId::new(id.family, p)))
                    .collect();
                fields_of(&common_derivations(&gs?)?, 2)
            }
            FieldSet::Generic => fields_of(&generic_derivations(id)?, 2),
        })
    }
}

#[derive(Clone, Debug)]
pub struct LeafSpec {
    pub line: usize,
    pub label: String,
    pub conditions: Vec<(Expr, Rel)>,
    pub guard: Guard,
    pub dim: Option<usize>,
    pub ks: Vec<Q>,
}

impl LeafSpec {
    pub fn is_nosol(&self) -> bool {
        self.label == "nosol"
    }

    /// Table label this leaf stands for: the label without a trailing sign.
    pub fn base_label(&self) -> &str {
        self.label.trim_end_matches(['+', '-'])
    }

    pub fn instantiate(&self, id: &CatalogId, k: Option<&Q>) -> Result<TreeBranch> {
        let mut b = TreeBranch {
            label: self.label.clone(),
            ..Default::default()
        };
        for (e, rel) in &self.conditions {
            let p = at_line(
                e.eval(&|s| {
                    if let Some(i) = crate::parse::coord_index(s, 'x') {
                        return Some(Poly::var(i));
                    }
                    if s == "k" {
                        return k.cloned().map(Poly::constant);
                    }
                    id.param(s).cloned().map(Poly::constant)
                }),
                self.line,
            )?;
            b.push(p, *rel);
        }
        Ok(b)
    }
}

#[derive(Clone, Debug)]
pub struct TreeSpec {
    pub name: String,
    pub family: Family,
    pub fields: FieldSet,
    pub guard: Guard,
    pub leaves: Vec<LeafSpec>,
}

pub fn parse_tree(name: &str, text: &str) -> Result<TreeSpec> {
    let mut family = None;
    let mut fields = FieldSet::Own;
    let mut guard = Guard::always();
    let mut leaves = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let ln = ln + 1;
        if line.is_empty() {
            continue;
        }
        if let Some((label, rest)) = line
            .split_once(" : ")
            .or_else(|| line.strip_suffix(" :").map(|l| (l, "")))
        {
            leaves.push(at_line(parse_leaf(label.trim(), rest), ln).map(|mut l| {
                l.line = ln;
                l
            })?);
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::parse(
                ln,
                format!("expected a header or a leaf: {line:?}"),
            ));
        };
        let value = value.trim();
        match key.trim() {
            "family" => family = Some(at_line(value.parse::<Family>(), ln)?),
            "fields" => fields = at_line(value.parse(), ln)?,
            "guard" => guard = at_line(Guard::parse(value), ln)?,
            k => return Err(Error::parse(ln, format!("unknown header {k:?}"))),
        }
    }
    let family = family.ok_or_else(|| Error::parse(0, format!("{name}: missing `family`")))?;
    Ok(TreeSpec {
        name: name.to_string(),
        family,
        fields,
        guard,
        leaves,
    })
}

fn parse_leaf(label: &str, rest: &str) -> Result<LeafSpec> {
    let mut parts = rest.split(';');
    let head = parts.next().unwrap_or("");
    let (conds, guard) = match head.split_once('@') {
        Some((c, g)) => (c, Guard::parse(g)?),
        None => (head, Guard::always()),
    };
    let mut conditions = Vec::new();
    for bar in conds.split('|') {
        for atom in split_top(bar, ',') {
            if !atom.trim().is_empty() {
                conditions.push(parse_atom(atom.trim())?);
            }
        }
    }
    let mut dim = None;
    let mut ks = Vec::new();
    for p in parts {
        let (key, value) = p
            .split_once('=')
            .ok_or_else(|| Error::parse(0, format!("expected `key = value` in {p:?}")))?;
        match key.trim() {
            "dim" => {
                dim = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse(0, format!("bad dim {value:?}")))?,
                )
            }
            "k" => {
                for v in value.split(',') {
                    ks.push(parse_q(v.trim())?);
                }
            }
            k => return Err(Error::parse(0, format!("unknown leaf key {k:?}"))),
        }
    }
    Ok(LeafSpec {
        line: 0,
        label: label.to_string(),
        conditions,
        guard,
        dim,
        ks,
    })
}

pub fn load_trees() -> Result<Vec<TreeSpec>> {
    TREES
        .iter()
        .map(|f| parse_tree(f, &data::read(f)?))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum LeafStatus {
    Verified(BranchReport),
    /// No mCYBE solutions, certified by the product of inequalities shown.
    Certified(String),
    /// No grid point was found but no certificate either.
    Unconfirmed,
    Failed(String),
}

impl LeafStatus {
    pub fn ok(&self) -> bool {
        matches!(self, LeafStatus::Verified(_) | LeafStatus::Certified(_))
    }
}

#[derive(Clone, Debug)]
pub struct LeafOutcome {
    pub tree: String,
    pub line: usize,
    pub label: String,
    pub algebra: String,
    pub k: Option<Q>,
    pub status: LeafStatus,
    /// Dimension stated for the leaf, compared with the verified rank.
    pub stated_dim: Option<usize>,
}

impl LeafOutcome {
    /// `(stated, computed)` when a verified leaf has another rank than stated.
    pub fn dim_mismatch(&self) -> Option<(usize, usize)> {
        match (&self.status, self.stated_dim) {
            (LeafStatus::Verified(r), Some(d)) if r.rank != d => Some((d, r.rank)),
            _ => None,
        }
    }
}

impl fmt::Display for LeafOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{} {} at {}",
            self.tree, self.line, self.label, self.algebra
        )?;
        if let Some(k) = &self.k {
            write!(f, " (k = {})", fmt_q(k))?;
        }
        match &self.status {
            LeafStatus::Verified(r) => {
                write!(f, ": rank {} on {} samples", r.rank, r.samples)?;
                if let Some((d, _)) = self.dim_mismatch() {
                    write!(f, " (stated dimension {d})")?;
                }
                Ok(())
            }
            LeafStatus::Certified(p) => write!(f, ": no solutions, certified by {p}"),
            LeafStatus::Unconfirmed => write!(f, ": no solutions found, no certificate"),
            LeafStatus::Failed(why) => write!(f, ": FAILED {why}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrickCheck {
    pub tree: String,
    pub algebra: String,
    pub stated: Vec<String>,
    pub computed: Vec<String>,
}

impl BrickCheck {
    pub fn ok(&self) -> bool {
        self.stated == self.computed
    }
}

#[derive(Clone, Debug, Default)]
pub struct TreesReport {
    pub leaves: Vec<LeafOutcome>,
    pub bricks: Vec<BrickCheck>,
    /// Catalog samples whose mCYBE system is not a Darboux family with
    /// constant cofactors.
    pub mcybe_families: Vec<String>,
    /// Leaves that no sample exercised, as `tree:line label`.
    pub unexercised: Vec<String>,
}

impl TreesReport {
    pub fn failures(&self) -> Vec<&LeafOutcome> {
        self.leaves.iter().filter(|o| !o.status.ok()).collect()
    }

    pub fn dim_mismatches(&self) -> Vec<&LeafOutcome> {
        self.leaves
            .iter()
            .filter(|o| o.dim_mismatch().is_some())
            .collect()
    }

    /// Leaves, bricks, mCYBE families and coverage; stated dimensions are
    /// reported by [`TreesReport::dim_mismatches`] and not counted here.
    pub fn passed(&self) -> bool {
        self.failures().is_empty()
            && self.bricks.iter().all(BrickCheck::ok)
            && self.mcybe_families.is_empty()
            && self.unexercised.is_empty()
    }
}

/// Extra sample points for a leaf: `(algebra, base label, k)` to points.
pub type Representatives<'a> = dyn Fn(&CatalogId, &str, Option<&Q>) -> Vec<Vec<Q>> + Sync + 'a;

struct Context {
    tree: usize,
    id: CatalogId,
    n: usize,
    fields: Vec<LinearVectorField>,
    mcybe: Vec<Poly>,
}

/// Checks one leaf at one algebra and `k`.
fn check_leaf(
    ctx: &Context,
    leaf: &LeafSpec,
    k: Option<&Q>,
    reps: &Representatives,
) -> Result<Option<LeafStatus>> {
    let branch = leaf.instantiate(&ctx.id, k)?;
    let grid = sample_locus(&branch, &ctx.mcybe, ctx.n, GRID_RANGE, GRID_CAP);
    if leaf.is_nosol() {
        if let Some(p) = grid.first() {
            return Ok(Some(LeafStatus::Failed(format!(
                "mCYBE solution {} in the locus",
                fmt_point(p)
            ))));
        }
        return Ok(Some(certify_empty(&branch, &ctx.mcybe)));
    }
    let mut samples = grid;
    for p in reps(&ctx.id, leaf.base_label(), k) {
        if !locus_contains(&branch, &p) {
            return Ok(Some(LeafStatus::Failed(format!(
                "representative {} outside the locus",
                fmt_point(&p)
            ))));
        }
        if !samples.contains(&p) {
            samples.push(p);
        }
    }
    if samples.is_empty() {
        return Ok(None);
    }
    Ok(Some(
        match verify_branch_with(&ctx.fields, &ctx.mcybe, &branch, &samples, None) {
            Ok(r) => LeafStatus::Verified(r),
            Err(Error::BranchInvalid { reason, .. }) => LeafStatus::Failed(reason),
            Err(e) => return Err(e),
        },
    ))
}

/// Looks for a product of inequalities that vanishes on the real zero set of
/// the equalities and the mCYBE system.
fn certify_empty(branch: &TreeBranch, mcybe: &[Poly]) -> LeafStatus {
    let gens: Vec<Poly> = branch.equalities.iter().chain(mcybe).cloned().collect();
    let closure = real_closure(&gens);
    let ineqs: Vec<&Poly> = branch.inequalities.iter().chain(&branch.positive).collect();
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    if ineqs.is_empty() {
        candidates.push(Vec::new());
    }
    candidates.extend((0..ineqs.len()).map(|i| vec![i]));
    for i in 0..ineqs.len() {
        for j in i + 1..ineqs.len() {
            candidates.push(vec![i, j]);
        }
    }
    if ineqs.len() > 2 {
        candidates.push((0..ineqs.len()).collect());
    }
    for c in candidates {
        let prod = c.iter().fold(Poly::one(), |acc, &i| acc * ineqs[i].clone());
        if certify_vanishing(&prod, &closure, 2) {
            let text: Vec<String> = c.iter().map(|&i| format!("({})", ineqs[i])).collect();
            return LeafStatus::Certified(if text.is_empty() {
                "1".into()
            } else {
                text.join("*")
            });
        }
    }
    LeafStatus::Unconfirmed
}

/// Runs every leaf of every tree at every catalog sample its guards allow.
pub fn verify_trees(trees: &[TreeSpec], reps: &Representatives) -> Result<TreesReport> {
    let mut report = TreesReport::default();
    let mut contexts = Vec::new();
    for (t, tree) in trees.iter().enumerate() {
        for params in tree.family.samples() {
            let id = CatalogId::new(tree.family, params);
            if !tree.guard.holds(&id.params)? {
                continue;
            }
            let g = catalog(&id)?;
            let n = g.dim() * (g.dim() - 1) / 2;
            contexts.push(Context {
                tree: t,
                n,
                fields: tree.fields.fields(&id)?,
                mcybe: yb_system(&g).mcybe,
                id,
            });
        }
    }
    report.bricks = check_bricks(&load_bricks()?)?;
    for id in crate::liealg::catalog::all_samples() {
        let g = catalog(&id)?;
        let mcybe = yb_system(&g).mcybe;
        let ok = verify_family(&fundamental_fields(&g, 2), &mcybe, 0).is_some_and(|f| f.linear);
        if !ok {
            report.mcybe_families.push(id.to_string());
        }
    }

    let mut jobs = Vec::new();
    for (c, ctx) in contexts.iter().enumerate() {
        for (l, leaf) in trees[ctx.tree].leaves.iter().enumerate() {
            if !leaf.guard.holds(&ctx.id.params)? {
                continue;
            }
            if leaf.ks.is_empty() {
                jobs.push((c, l, None));
            } else {
                jobs.extend(leaf.ks.iter().map(|k| (c, l, Some(k.clone()))));
            }
        }
    }
    let results: Result<Vec<Option<LeafOutcome>>> = jobs
        .par_iter()
        .map(|(c, l, k)| {
            let ctx = &contexts[*c];
            let tree = &trees[ctx.tree];
            let leaf = &tree.leaves[*l];
            Ok(
                check_leaf(ctx, leaf, k.as_ref(), reps)?.map(|status| LeafOutcome {
                    tree: tree.name.clone(),
                    line: leaf.line,
                    label: leaf.label.clone(),
                    algebra: ctx.id.to_string(),
                    k: k.clone(),
                    status,
                    stated_dim: leaf.dim,
                }),
            )
        })
        .collect();
    report.leaves = results?.into_iter().flatten().collect();

    let hit: BTreeSet<(String, usize)> = report
        .leaves
        .iter()
        .map(|o| (o.tree.clone(), o.line))
        .collect();
    for tree in trees {
        for leaf in &tree.leaves {
            if !hit.contains(&(tree.name.clone(), leaf.line)) {
                report
                    .unexercised
                    .push(format!("{}:{} {}", tree.name, leaf.line, leaf.label));
            }
        }
    }
    Ok(report)
}

pub const BRICKS: &str = "trees/bricks.txt";

/// A stated set of bricks: `family | guard | fields | b1, b2, ...`.
#[derive(Clone, Debug)]
pub struct BrickStatement {
    pub line: usize,
    pub family: Family,
    pub guard: Guard,
    pub fields: FieldSet,
    pub bricks: Vec<Poly>,
}

pub fn load_bricks() -> Result<Vec<BrickStatement>> {
    let text = data::read(BRICKS)?;
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
                "expected `family | guard | fields | bricks`",
            ));
        }
        let bricks: Result<Vec<Poly>> = f[3]
            .split(',')
            .map(|b| parse_poly(b.trim(), &|_| None).map(|p| p.monic()))
            .collect();
        out.push(BrickStatement {
            line: ln + 1,
            family: at_line(f[0].parse(), ln + 1)?,
            guard: at_line(Guard::parse(f[1]), ln + 1)?,
            fields: at_line(f[2].parse(), ln + 1)?,
            bricks: at_line(bricks, ln + 1)?,
        });
    }
    Ok(out)
}

/// Compares every statement with [`find_bricks`] at every sample it covers.
pub fn check_bricks(statements: &[BrickStatement]) -> Result<Vec<BrickCheck>> {
    let mut out = Vec::new();
    for st in statements {
        for params in st.family.samples() {
            let id = CatalogId::new(st.family, params);
            if !st.guard.holds(&id.params)? {
                continue;
            }
            let mut computed: Vec<String> = find_bricks(&st.fields.fields(&id)?)
                .iter()
                .map(|b| b.poly.to_string())
                .collect();
            computed.sort();
            let mut stated: Vec<String> = st.bricks.iter().map(Poly::to_string).collect();
            stated.sort();
            out.push(BrickCheck {
                tree: format!("{BRICKS}:{}", st.line),
                algebra: id.to_string(),
                stated,
                computed,
            });
        }
    }
    Ok(out)
}

/// Summary counts per status, for reports.
pub fn status_counts(report: &TreesReport) -> BTreeMap<&'static str, usize> {
    let mut m = BTreeMap::new();
    for o in &report.leaves {
        let key = match o.status {
            LeafStatus::Verified(_) => "verified",
            LeafStatus::Certified(_) => "certified",
            LeafStatus::Unconfirmed => "unconfirmed",
            LeafStatus::Failed(_) => "failed",
        };
        *m.entry(key).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_leaves() {
        let t = parse_tree(
            "t",
            "family = s4\nfields = common\n\
             VII : x6=0, x5=0 | x4!=0, x3!=0 @ alpha=-2 or alpha=-1 ; dim=4\n\
             IV : x4-k*x3=0 | x1>0 ; k = 2, -1/2\n",
        )
        .unwrap();
        assert_eq!(t.fields, FieldSet::Common);
        assert_eq!(t.leaves.len(), 2);
        assert_eq!(t.leaves[0].dim, Some(4));
        assert_eq!(t.leaves[0].line, 3);
        assert_eq!(t.leaves[1].ks.len(), 2);
        let id = CatalogId::with(Family::S4, &[("alpha", Q::from_integer((-2).into()))]);
        let b = t.leaves[1]
            .instantiate(&id, t.leaves[1].ks.first())
            .unwrap();
        assert_eq!(b.equalities[0].to_string(), "-2*x3 + x4");
        assert_eq!(b.positive.len(), 1);
        assert!(parse_tree("t", "fields = own\n").is_err());
    }

    #[test]
    fn shipped_trees_parse() {
        let trees = load_trees().unwrap();
        assert_eq!(trees.len(), TREES.len());
        assert!(trees.iter().all(|t| !t.leaves.is_empty()));
    }
}
