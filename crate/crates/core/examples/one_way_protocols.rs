//! Alice measures in a catalog basis, Bob reads off orthogonal residuals.

use locc::bell::BellSet;
use locc::protocol::{bob_residuals, catalog_bases, find_protocol, worst_overlap};

pub fn run() -> locc::Result<()> {
    let set = BellSet::parse(4, "00,02,20,22")?;
    let set6 = catalog_bases(4)?.pop().expect("catalog is non-empty");
    for (alpha, outcome) in bob_residuals(&set.states(), set6.alice_basis())?.iter().enumerate() {
        let probs: Vec<String> = outcome.iter().map(|r| format!("{:.3}", r.probability)).collect();
        println!("outcome {alpha}: probabilities [{}]", probs.join(", "));
    }
    println!("{} on {set}: worst residual overlap {:.1e}", set6.provenance(), worst_overlap(&set.states(), &set6)?);

    for spec in ["00,01,02,03", "00,11,22,33", "00,01,13,21", "13,20,31,32", "00,11,31,32"] {
        let s = BellSet::parse(4, spec)?;
        match find_protocol(&s)? {
            Some(p) => println!("{s}: {}", p.summary()),
            None => println!("{s}: no catalog protocol"),
        }
    }
    Ok(())
}

fn main() -> locc::Result<()> {
    run()
}
