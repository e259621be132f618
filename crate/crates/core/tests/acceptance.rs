//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A criterion is PASS only when every stated value is reproduced. A FAIL is
//! accepted by the test when each failing item is a documented erratum of the
//! printed data; any undocumented failure fails the test.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use darbouxlie::centerext::{build_rep, solve_grading, GradingSolution};
use darbouxlie::classify::coboundary::{check_automorphisms, load_class_data, verify_all_classes};
use darbouxlie::classify::{
    errata_keys, load_orbit_errata, orbit_records, verify_all_tables, RowCheck,
};
use darbouxlie::darboux::tree::{load_trees, verify_trees};
use darbouxlie::exactmath::qi;
use darbouxlie::grassmann::golden::{check_errata, check_invariants, check_tables, load_errata};
use darbouxlie::grassmann::invariants;
use darbouxlie::liealg::catalog::{all_samples, extra};
use darbouxlie::liealg::unit;
use darbouxlie::yangbaxter::cocycle_failures;
use darbouxlie::yangbaxter::golden::check_systems;
use darbouxlie::{catalog, CatalogId, Family, MultiVector, RatMatrix};

struct Outcome {
    pass: bool,
    /// Every failing item is a documented erratum.
    documented: bool,
    summary: String,
    details: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, documented: bool, summary: String, details: Vec<String>) -> Self {
        Outcome {
            pass,
            documented: pass || documented,
            summary,
            details,
        }
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn schouten_golden() -> Outcome {
    let t = Instant::now();
    let report = check_tables().unwrap();
    let errata = load_errata().unwrap();
    let undocumented = report.undocumented(&errata);
    let oracle = check_errata(&errata).unwrap();
    let elapsed = t.elapsed();
    let details = report
        .mismatches
        .iter()
        .map(|m| {
            format!(
                "{} line {} {} [{}, {}]: printed {}, computed {}",
                m.entry.table,
                m.entry.line,
                m.algebra,
                m.entry.a,
                m.entry.b,
                m.entry.expected,
                m.computed
            )
        })
        .chain(oracle.iter().map(|o| format!("erratum oracle: {o}")))
        .collect();
    let pass = report.mismatches.is_empty() && elapsed < Duration::from_secs(5);
    Outcome::new(
        pass,
        undocumented.is_empty() && oracle.is_empty(),
        format!(
            "{} entries, {} evaluations, {} mismatches ({} undocumented), {}",
            report.entries,
            report.checks,
            report.mismatches.len(),
            undocumented.len(),
            secs(elapsed)
        ),
        details,
    )
}

fn yang_baxter_systems() -> Outcome {
    let t = Instant::now();
    let report = check_systems(10_000).unwrap();
    let elapsed = t.elapsed();
    let mut details: Vec<String> = report
        .failures()
        .iter()
        .map(|c| format!("{} line {}: {:?}", c.algebra, c.line, c.comparison))
        .collect();
    details.extend(report.uncovered.iter().cloned());
    let common: usize = report
        .checks
        .iter()
        .map(|c| c.comparison.common_points)
        .sum();
    Outcome::new(
        report.passed() && elapsed < Duration::from_secs(30),
        false,
        format!(
            "{} system comparisons at 10000 points each ({} common points), {} failures, {}",
            report.checks.len(),
            common,
            report.failures().len(),
            secs(elapsed)
        ),
        details,
    )
}

fn invariant_spaces() -> Outcome {
    let checks = check_invariants().unwrap();
    let mut details: Vec<String> = checks
        .iter()
        .filter(|c| !c.ok)
        .map(|c| {
            format!(
                "{} degree {}: stated {:?}, computed {:?}",
                c.algebra, c.degree, c.expected, c.computed
            )
        })
        .collect();
    // e123 is invariant in s3 exactly when alpha + beta = -1
    for (a, b) in
        [(-1, -1, 2, 2), (1, -1, 1, 1), (1, -1, 2, 2), (2, 1, 3, 3)].map(|(n1, n2, d1, d2)| {
            (
                darbouxlie::exactmath::q(n1, d1),
                darbouxlie::exactmath::q(n2, d2),
            )
        })
    {
        let id = CatalogId::with(Family::S3, &[("alpha", a.clone()), ("beta", b.clone())]);
        let inv3 = invariants(&catalog(&id).unwrap(), 3);
        let e123 = MultiVector::parse(4, "e123", &|_| None).unwrap();
        let want = &a + &b == qi(-1);
        let got = inv3.len() == 1 && inv3[0].terms().all(|(bl, _)| e123.coeff(*bl) != qi(0));
        if want != got || (!want && !inv3.is_empty()) {
            details.push(format!("{id}: (L3)^g = {inv3:?}"));
        }
    }
    Outcome::new(
        details.is_empty(),
        false,
        format!(
            "{} (algebra, degree) statements compared, {} disagree",
            checks.len(),
            details.len()
        ),
        details,
    )
}

/// Criteria 4 and 5 share one table run.
fn orbit_tables() -> (Outcome, Outcome) {
    let t = Instant::now();
    let report = verify_all_tables().unwrap();
    let elapsed = t.elapsed();
    let errata = errata_keys(&load_orbit_errata().unwrap());
    let failures = report.failure_keys();
    let undocumented: BTreeSet<_> = failures.difference(&errata).collect();
    let pick = |checks: &[RowCheck]| -> (Vec<String>, bool) {
        let lines: Vec<String> = report
            .failures()
            .filter(|(_, c, _)| checks.contains(c))
            .map(|(r, c, why)| {
                format!(
                    "{} {} {}: {why}",
                    r.record.algebra,
                    r.record.label,
                    c.name()
                )
            })
            .collect();
        let documented = !undocumented.iter().any(|(_, _, c)| checks.contains(c));
        (lines, documented)
    };
    let records = report.results.len();
    let (dim_lines, dim_doc) = pick(&[RowCheck::Dim]);
    let (star_lines, star_doc) = pick(&[RowCheck::Star, RowCheck::Mcybe]);
    let (other_lines, other_doc) = pick(&[RowCheck::Locus, RowCheck::Stratum]);
    let starred = report.results.iter().filter(|r| r.record.star).count();
    let mut d4 = dim_lines.clone();
    d4.extend(other_lines.iter().map(|l| format!("(related) {l}")));
    let c4 = Outcome::new(
        dim_lines.is_empty() && elapsed < Duration::from_secs(30),
        dim_doc && other_doc,
        format!(
            "{records} representatives over all parameter samples, {} stated dimensions differ, {} locus/stratum notes, {}",
            dim_lines.len(),
            other_lines.len(),
            secs(elapsed)
        ),
        d4,
    );
    let c5 = Outcome::new(
        star_lines.is_empty(),
        star_doc,
        format!(
            "{records} representatives ({starred} starred), {} star/mCYBE disagreements",
            star_lines.len()
        ),
        star_lines,
    );
    (c4, c5)
}

fn darboux_trees() -> Outcome {
    let t = Instant::now();
    let trees = load_trees().unwrap();
    let report = verify_trees(&trees, &darbouxlie::classify::table_representatives).unwrap();
    let elapsed = t.elapsed();
    let mut details: Vec<String> = report.failures().iter().map(|o| o.to_string()).collect();
    details.extend(report.bricks.iter().filter(|b| !b.ok()).map(|b| {
        format!(
            "bricks {} {}: stated {:?}, computed {:?}",
            b.tree, b.algebra, b.stated, b.computed
        )
    }));
    details.extend(
        report
            .mcybe_families
            .iter()
            .map(|s| format!("mCYBE family not closed: {s}")),
    );
    details.extend(
        report
            .unexercised
            .iter()
            .map(|s| format!("unexercised leaf: {s}")),
    );
    let bricks: Vec<String> = report
        .bricks
        .iter()
        .filter(|b| ["s1", "s5", "s6"].iter().any(|f| b.algebra.starts_with(f)))
        .map(|b| format!("{}: {{{}}}", b.algebra, b.computed.join(", ")))
        .collect();
    Outcome::new(
        report.passed() && elapsed < Duration::from_secs(120),
        false,
        format!(
            "{} leaves checked ({} failing), {} brick statements, {}; bricks {}",
            report.leaves.len(),
            report.failures().len(),
            report.bricks.len(),
            secs(elapsed),
            bricks.join("; ")
        ),
        details,
    )
}

fn central_extension() -> Outcome {
    let t = Instant::now();
    let mut details = Vec::new();
    let mut with_center = 0;
    for id in all_samples() {
        let g = catalog(&id).unwrap();
        if g.center().is_empty() {
            continue;
        }
        with_center += 1;
        match solve_grading(&g) {
            None => details.push(format!("{id}: no grading found")),
            Some(sol) => {
                let rep = build_rep(&g, &sol).unwrap();
                if !rep.commutation_failures(&g).is_empty() || !rep.is_faithful() {
                    details.push(format!("{id}: representation check failed for {sol}"));
                }
            }
        }
    }
    let s1 = catalog(&CatalogId::plain(Family::S1)).unwrap();
    let sol = GradingSolution {
        alphas: [1, 1, 0, 0].map(qi).to_vec(),
        center_idx: vec![0],
    };
    let rep = build_rep(&s1, &sol).unwrap();
    let m = |rows: [[i64; 5]; 5]| {
        RatMatrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| qi(x)).collect())
                .collect::<Vec<_>>(),
            5,
        )
    };
    let z = [0; 5];
    let printed = [
        m([[0, 0, 0, 0, -1], z, z, z, z]),
        m([[0, 0, 0, -1, 0], [0, 0, 0, 0, -1], z, z, z]),
        m([z, z, [0, 0, 0, -1, 0], z, z]),
        m([[0, 1, 0, 0, 0], z, [0, 0, 1, 0, 0], z, z]),
    ];
    if rep.matrices != printed || !rep.is_faithful() {
        details.push("s1: printed matrices not reproduced".into());
    }
    for name in ["s6_231", "7I"] {
        if let Some(sol) = solve_grading(&extra(name).unwrap()) {
            details.push(format!("{name}: unexpected grading {sol}"));
        }
    }
    let elapsed = t.elapsed();
    Outcome::new(
        details.is_empty() && elapsed < Duration::from_secs(5),
        false,
        format!(
            "{with_center} samples with center represented faithfully, s1 matrices reproduced, 6- and 7-dimensional counterexamples infeasible, {}",
            secs(elapsed)
        ),
        details,
    )
}

fn coboundary_classes() -> Outcome {
    let data = load_class_data().unwrap();
    let mut details = check_automorphisms(&data).unwrap();
    let reports = verify_all_classes().unwrap();
    let mut errata = Vec::new();
    let mut unwitnessed = Vec::new();
    let (mut classes, mut links) = (0, 0);
    for r in &reports {
        details.extend(r.problems.iter().map(|p| format!("{}: {p}", r.algebra)));
        details.extend(
            r.links
                .iter()
                .filter(|l| l.failure.is_some())
                .map(|l| format!("{}: {l}", r.algebra)),
        );
        details.extend(
            r.classes
                .iter()
                .filter(|c| !c.witnessed())
                .map(|c| format!("{}: class {} unreached", r.algebra, c.name)),
        );
        errata.extend(
            r.errata
                .iter()
                .map(|e| format!("{}: erratum: {}", r.algebra, e.note)),
        );
        unwitnessed.extend(
            r.unwitnessed
                .iter()
                .map(|u| format!("{} {}", r.algebra, u.label)),
        );
        classes += r.classes.len();
        links += r.links.len();
    }
    let verified = details.is_empty();
    let summary = format!(
        "{classes} classes via {links} verified links over {} samples; {} printed groupings contradicted; {} unwitnessed merges: {}",
        reports.len(),
        errata.len(),
        unwitnessed.len(),
        unwitnessed.join(", ")
    );
    details.extend(errata.iter().cloned());
    Outcome::new(verified && errata.is_empty(), verified, summary, details)
}

fn property_suites() -> Outcome {
    const N: usize = 1000;
    let insts = instances();
    let mut gen = Gen::new(0xacce);
    let mut failures: Vec<String> = Vec::new();
    let mut counts = Vec::new();
    let mut run = |name: &str, f: &mut dyn FnMut(&mut Gen) -> Check| {
        let mut bad = 0;
        for _ in 0..N {
            if let Err(e) = f(&mut gen) {
                bad += 1;
                if failures.len() < 20 {
                    failures.push(format!("{name}: {e}"));
                }
            }
        }
        counts.push(format!("{name} {}/{N}", N - bad));
    };
    run("symmetry", &mut |g| {
        let i = g.index(insts.len());
        let (s, l) = (1 + g.index(3), 1 + g.index(3));
        let (a, b) = (g.mv(4, s), g.mv(4, l));
        schouten_symmetry(&insts[i].g, &a, &b)
    });
    run("leibniz", &mut |g| {
        let i = g.index(insts.len());
        let s = 1 + g.index(3);
        let l = 1 + g.index(2);
        let k = 1 + g.index(4 - l);
        let (a, b, c) = (g.mv(4, s), g.mv(4, l), g.mv(4, k));
        schouten_leibniz(&insts[i].g, &a, &b, &c)
    });
    run("jacobi", &mut |g| {
        let i = g.index(insts.len());
        let (u, v, w) = (g.vec(4), g.vec(4), g.vec(4));
        jacobi(&insts[i].g, &u, &v, &w)
    });
    run("derivation closure", &mut |g| {
        let inst = &insts[g.index(insts.len())];
        let k = inst.ders.len();
        let (c1, c2) = (g.vec(k), g.vec(k));
        derivation_closure(&inst.g, &inst.ders, &c1, &c2)
    });
    run("cocycle", &mut |g| {
        let i = g.index(insts.len());
        let (r, v1, v2) = (g.mv(4, 2), g.vec(4), g.vec(4));
        cocycle(&insts[i].g, &r, &v1, &v2)
    });
    // cocycle identity on basis pairs at every table representative
    let mut reps = 0;
    for inst in insts {
        for rec in orbit_records(&inst.id).unwrap() {
            reps += 1;
            let n = inst.g.dim();
            let lib = cocycle_failures(&inst.g, &rec.rep).unwrap();
            if !lib.is_empty() {
                failures.push(format!(
                    "{} {}: cocycle fails on {lib:?}",
                    inst.id, rec.label
                ));
            }
            for a in 0..n {
                for b in a + 1..n {
                    if let Err(e) = cocycle(&inst.g, &rec.rep, &unit(n, a), &unit(n, b)) {
                        failures.push(format!("{} {}: {e}", inst.id, rec.label));
                    }
                }
            }
        }
    }
    counts.push(format!("cocycle at {reps} representatives"));
    Outcome::new(failures.is_empty(), false, counts.join(", "), failures)
}

#[test]
fn acceptance() {
    let mut outcomes = vec![
        ("Schouten golden suite", schouten_golden()),
        ("Yang-Baxter systems", yang_baxter_systems()),
        ("invariant spaces", invariant_spaces()),
    ];
    let (c4, c5) = orbit_tables();
    outcomes.push(("orbit dimensions", c4));
    outcomes.push(("star consistency", c5));
    outcomes.push(("Darboux verification", darboux_trees()));
    outcomes.push(("central extension", central_extension()));
    outcomes.push(("coboundary classes", coboundary_classes()));
    outcomes.push(("property suites", property_suites()));
    // written to the stderr handle directly so the report shows in a plain
    // `cargo test` run, not only with --nocapture
    let mut report = String::from("\n");
    for (k, (name, o)) in outcomes.iter().enumerate() {
        report.push_str(&format!(
            "criterion {} ({name}): {}: {}\n",
            k + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.summary
        ));
        for d in &o.details {
            report.push_str(&format!("    {d}\n"));
        }
    }
    std::io::Write::write_all(&mut std::io::stderr(), report.as_bytes()).unwrap();
    let unexplained: Vec<&str> = outcomes
        .iter()
        .filter(|(_, o)| !o.documented)
        .map(|(n, _)| *n)
        .collect();
    assert!(
        unexplained.is_empty(),
        "criteria failing without documented errata: {unexplained:?}"
    );
}
