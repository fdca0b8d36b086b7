//! Every class of four Bell states in C^4 ⊗ C^4: condition R verdict and, for
//! the passing ones, a verified one-way protocol.

use std::collections::BTreeMap;

use locc::constraints::DEFAULT_RANK_TOL;
use locc::protocol::{classify_all, Tally};

pub fn run() -> locc::Result<()> {
    let reports = classify_all(4, 4, DEFAULT_RANK_TOL)?;
    let t = Tally::of(&reports);
    println!("{} classes: fails_r={} passes_r={} with_protocol={}", reports.len(), t.fails_r, t.passes_r, t.passes_r_with_protocol);
    let mut by_basis: BTreeMap<String, usize> = BTreeMap::new();
    for p in reports.iter().filter_map(|r| r.protocol) {
        *by_basis.entry(p.provenance.to_string()).or_default() += 1;
    }
    for (basis, n) in by_basis {
        println!("  {basis:<13} {n}");
    }
    Ok(())
}

fn main() -> locc::Result<()> {
    run()
}
