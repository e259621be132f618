//! Golden Yang–Baxter systems: `family | guard | kind | p1, p2, ...` per
//! line, compared with the computed systems as real varieties.

use rayon::prelude::*;

use crate::data;
use crate::error::{Error, Result};
use crate::exactmath::Poly;
use crate::liealg::catalog::{catalog, CatalogId, Family};
use crate::parse::{at_line, parse_poly, split_top, strip_comment, Guard};

use super::variety::{compare_varieties, VarietyComparison};
use super::yb_system;

pub const SYSTEMS: &str = "ybe/systems.txt";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SystemKind {
    Mcybe,
    Cybe,
}

#[derive(Clone, Debug)]
pub struct SystemEntry {
    pub line: usize,
    pub family: Family,
    pub guard: Guard,
    pub kind: SystemKind,
    pub gens: Vec<String>,
}

impl SystemEntry {
    pub fn instantiate(&self, id: &CatalogId) -> Result<Vec<Poly>> {
        self.gens
            .iter()
            .map(|s| at_line(parse_poly(s, &|p| id.param(p).cloned()), self.line))
            .collect()
    }
}

pub fn load_systems() -> Result<Vec<SystemEntry>> {
    let text = data::read(SYSTEMS)?;
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
                "expected `family | guard | kind | polys`",
            ));
        }
        let kind = match f[2] {
            "mcybe" => SystemKind::Mcybe,
            "cybe" => SystemKind::Cybe,
            k => return Err(Error::parse(ln + 1, format!("unknown system kind {k:?}"))),
        };
        out.push(SystemEntry {
            line: ln + 1,
            family: at_line(f[0].parse(), ln + 1)?,
            guard: at_line(Guard::parse(f[1]), ln + 1)?,
            kind,
            gens: split_top(f[3], ',')
                .into_iter()
                .map(|s| s.trim().to_string())
                .collect(),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SystemCheck {
    pub algebra: CatalogId,
    pub kind: SystemKind,
    pub line: usize,
    pub computed: Vec<String>,
    pub comparison: VarietyComparison,
}

#[derive(Clone, Debug, Default)]
pub struct SystemsReport {
    pub checks: Vec<SystemCheck>,
    /// Samples with no applicable mCYBE line, or with more than one.
    pub uncovered: Vec<String>,
}

impl SystemsReport {
    pub fn failures(&self) -> Vec<&SystemCheck> {
        self.checks
            .iter()
            .filter(|c| !c.comparison.equal())
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.uncovered.is_empty() && self.failures().is_empty()
    }
}

/// Compares every applicable golden system with the computed one at every
/// parameter sample, using `points` random rational points per comparison.
pub fn check_systems(points: usize) -> Result<SystemsReport> {
    let entries = load_systems()?;
    let mut jobs = Vec::new();
    let mut report = SystemsReport::default();
    for fam in Family::ALL {
        for params in fam.samples() {
            let id = CatalogId::new(fam, params);
            let mut mcybe_lines = 0;
            for e in entries.iter().filter(|e| e.family == fam) {
                if e.guard.holds(&id.params)? {
                    mcybe_lines += usize::from(e.kind == SystemKind::Mcybe);
                    jobs.push((id.clone(), e));
                }
            }
            if mcybe_lines != 1 {
                report
                    .uncovered
                    .push(format!("{id}: {mcybe_lines} mcybe lines apply"));
            }
        }
    }
    let checks: Result<Vec<SystemCheck>> = jobs
        .par_iter()
        .enumerate()
        .map(|(k, (id, e))| {
            let g = catalog(id)?;
            let sys = yb_system(&g);
            let computed = match e.kind {
                SystemKind::Mcybe => sys.mcybe,
                SystemKind::Cybe => sys.cybe,
            };
            let printed = e.instantiate(id)?;
            let n = g.dim() * (g.dim() - 1) / 2;
            let comparison = compare_varieties(&computed, &printed, n, points, 0x5eed + k as u64);
            Ok(SystemCheck {
                algebra: id.clone(),
                kind: e.kind,
                line: e.line,
                computed: computed.iter().map(Poly::to_string).collect(),
                comparison,
            })
        })
        .collect();
    report.checks = checks?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_systems_match() {
        let r = check_systems(300).unwrap();
        assert!(r.uncovered.is_empty(), "{:?}", r.uncovered);
        if let Some(c) = r.failures().first() {
            panic!(
                "{} line {}: {:?} vs computed {:?}",
                c.algebra, c.line, c.comparison, c.computed
            );
        }
    }
}
