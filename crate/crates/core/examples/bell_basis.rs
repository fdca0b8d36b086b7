//! Generalized Bell states in C^d ⊗ C^d: orthonormality, maximal
//! entanglement, and the Weyl shift that moves one state onto another.

use locc::bell::{bell_state, enumerate_sets, mes_deviation, shift_unitary, BellIndex};
use locc::linalg::{identity, tensor};

pub fn run() -> locc::Result<()> {
    for d in 2..=5 {
        let states = enumerate_sets(d, 1).map(|s| s.states().remove(0)).collect::<Vec<_>>();
        let mut gram: f64 = 0.0;
        let mut mes: f64 = 0.0;
        for (i, a) in states.iter().enumerate() {
            mes = mes.max(mes_deviation(a)?);
            for (j, b) in states.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                gram = gram.max((a.inner(b).norm() - target).abs());
            }
        }
        println!("d={d}: {} states, max Gram deviation {gram:.1e}, max reduced-state deviation from I/d {mes:.1e}", states.len());
    }

    let d = 4;
    let from = BellIndex::new(1, 3);
    let delta = BellIndex::new(2, 1);
    let u = tensor(&shift_unitary(d, delta)?, &identity(d));
    let moved = bell_state(d, from)?.apply(&u)?;
    let to = from.translate(delta, d);
    let overlap = bell_state(d, to)?.inner(&moved).norm();
    println!("|<psi_{}{}| (U x I) |psi_{}{}>| = {overlap:.12}", to.n, to.m, from.n, from.m);
    Ok(())
}

fn main() -> locc::Result<()> {
    run()
}
