//! The set ψ00, ψ11, ψ31, ψ32 in C^4 ⊗ C^4: the orthogonality-preserving
//! effects form a two-block family, and any non-trivial member lowers the
//! Holevo-like bound below 2 bits, so the set is locally indistinguishable.

use locc::bounds::{ens2_post_ensemble, ens2_set, holevo_like_bound, pmrs, ens2_kraus, Ens2Params, Ensemble};
use locc::linalg::Side;

pub fn run() -> locc::Result<()> {
    let ens = Ensemble::from_set(&ens2_set())?;
    println!("before measurement: {:.10} bits", holevo_like_bound(&ens)?);
    let p = Ens2Params::new(1.0, 0.5, 0.25, std::f64::consts::FRAC_PI_3, std::f64::consts::PI / 5.0)?;
    let branch = pmrs(&ens, &ens2_kraus(&p)?, Side::A)?;
    println!("per-state spectrum (closed form): {:?}", p.state_spectrum());
    println!("Bob average spectrum: numeric {:?}", branch.bob_average.eigenvalues());
    println!("                      closed form {:?}", p.bob_average_spectrum());
    println!("after measurement: {:.10} bits (closed form {:.10})", holevo_like_bound(&ens2_post_ensemble(&p)?)?, p.closed_form_bound());
    for scale in [0.0, 0.05, 0.1, 0.5, 0.9] {
        let q = Ens2Params::new(1.0, scale, -scale / 2.0, 0.4, 1.1)?;
        println!("  mu0={scale:<4} mu1={:<6}: {:.10} bits", -scale / 2.0, holevo_like_bound(&ens2_post_ensemble(&q)?)?);
    }
    Ok(())
}

fn main() -> locc::Result<()> {
    run()
}
