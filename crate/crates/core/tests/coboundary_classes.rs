use darbouxlie::classify::coboundary::{check_automorphisms, load_class_data, verify_all_classes};

#[test]
fn coboundary_classes_are_witnessed() {
    assert!(check_automorphisms(&load_class_data().unwrap())
        .unwrap()
        .is_empty());
    let reports = verify_all_classes().unwrap();
    let mut unwitnessed = Vec::new();
    let (mut separated, mut uncertified) = (0, 0);
    for r in &reports {
        for p in &r.problems {
            println!("{}: {p}", r.algebra);
        }
        for l in r.links.iter().filter(|l| l.failure.is_some()) {
            println!("{}: {l}", r.algebra);
        }
        for c in r.classes.iter().filter(|c| !c.witnessed()) {
            println!(
                "{}: class {} unreached {:?}",
                r.algebra, c.name, c.unreached
            );
        }
        for e in &r.errata {
            println!("{}: erratum: {}", r.algebra, e.note);
        }
        for u in &r.unwitnessed {
            unwitnessed.push(format!("{} {}", r.algebra, u.label));
        }
        separated += r.separated.len();
        uncertified += r.uncertified.len();
    }
    println!("unwitnessed merges: {unwitnessed:?}");
    println!("separated pairs {separated}, uncertified pairs {uncertified}");
    assert!(reports.iter().all(|r| r.passed()));
}
