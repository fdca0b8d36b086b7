//! Orbits of Bell index sets under simultaneous translation.

use locc::bell::{equivalence_classes, BellSet};

pub fn run() -> locc::Result<()> {
    for (d, k) in [(2, 2), (3, 3), (4, 1), (4, 2), (4, 3), (4, 4)] {
        let classes = equivalence_classes(d, k);
        let total: usize = classes.iter().map(|c| c.size()).sum();
        println!("d={d} k={k}: {} classes over {total} sets", classes.len());
    }
    let set = BellSet::parse(4, "13,20,31,32")?;
    println!("canonical form of {set}: {}", set.canonical_form());
    Ok(())
}

fn main() -> locc::Result<()> {
    run()
}
