//! Condition R on a few sets: nullspace dimensions per measuring side and,
//! when one exists, a non-trivial effect that keeps Bob's average maximally
//! mixed.

use locc::bell::BellSet;
use locc::constraints::{condition_r_for_set, psd_perturbation_range, DEFAULT_RANK_TOL};

pub fn run() -> locc::Result<()> {
    for spec in ["00,11,31,32", "00,01,02,03", "00,01,10,11", "00,02,20,22", "00,01,02,03,10"] {
        let set = BellSet::parse(4, spec)?;
        let v = condition_r_for_set(&set, DEFAULT_RANK_TOL)?;
        print!("{set}: {}", v.outcome);
        if let (Some(a), Some(b)) = (v.alice_dims(), v.bob_dims()) {
            print!("  alice op={} op+R={} R={}  bob op={} op+R={}", a.op_only, a.op_plus_r, a.r_only, b.op_only, b.op_plus_r);
        }
        if let Some((side, x)) = &v.witness {
            let (lo, hi) = psd_perturbation_range(x)?;
            print!("  witness on {side}, I + eX >= 0 for e in [{lo:.3}, {hi:.3}]");
        }
        println!();
    }
    Ok(())
}

fn main() -> locc::Result<()> {
    run()
}
