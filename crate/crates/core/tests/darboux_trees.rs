use darbouxlie::classify::table_representatives;
use darbouxlie::darboux::tree::{load_trees, status_counts, verify_trees};

#[test]
fn trees_hold_with_table_representatives() {
    let trees = load_trees().unwrap();
    let r = verify_trees(&trees, &table_representatives).unwrap();
    for o in &r.leaves {
        if !o.status.ok() || o.dim_mismatch().is_some() {
            println!("{o}");
        }
    }
    for b in r.bricks.iter().filter(|b| !b.ok()) {
        println!(
            "bricks {} {}: stated {:?} computed {:?}",
            b.tree, b.algebra, b.stated, b.computed
        );
    }
    println!("mcybe families: {:?}", r.mcybe_families);
    println!("unexercised: {:?}", r.unexercised);
    println!("{:?}", status_counts(&r));
    assert!(r.passed());
}
