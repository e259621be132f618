use darbouxlie::classify::{errata_keys, load_orbit_errata, verify_all_tables};

#[test]
fn orbit_tables_match_up_to_errata() {
    let report = verify_all_tables().unwrap();
    for r in report.results.iter().filter(|r| !r.passed()) {
        println!("{r}");
    }
    let failures = report.failure_keys();
    let errata = errata_keys(&load_orbit_errata().unwrap());
    let undocumented: Vec<_> = failures.difference(&errata).collect();
    let stale: Vec<_> = errata.difference(&failures).collect();
    println!(
        "{} records, {} failing checks",
        report.results.len(),
        failures.len()
    );
    assert!(
        undocumented.is_empty(),
        "undocumented failures: {undocumented:?}"
    );
    assert!(stale.is_empty(), "errata that no longer fail: {stale:?}");
}
