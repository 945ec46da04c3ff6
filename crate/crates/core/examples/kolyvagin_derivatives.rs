//! Kolyvagin derivative operators and the invariance of `D_r x_r` modulo
//! `M` on a synthetic Euler system.

use iwasawa::euler::{bracket_q, phi_q, LocalDatum, SyntheticEulerSystem};
use iwasawa::Result;

pub fn run() -> Result<()> {
    let sys = SyntheticEulerSystem::random(7, 2, 2)?;
    let g = sys.group();
    println!("M = {}, primes {:?}, |Delta| = {}", g.modulus(), g.primes(), g.delta().order());
    println!("V has {} generators", sys.generator_count());
    println!("N_q1 = {}", g.norm_element("q1")?);
    println!("D_q1 = {}", g.derivative_element("q1")?);
    println!("(tau - 1) D = M - N: {}", g.telescope_check("q1")?);

    for text in ["1", "q1", "q2", "q1q2"] {
        let r = g.parse_ideal(text)?;
        let k = sys.kolyvagin_derivative(&r)?;
        println!("r = {text:<5} invariant: {}  kappa(r) zero: {}", sys.invariance_check(&r)?, k.is_zero());
    }

    let broken = SyntheticEulerSystem::new(g.clone(), Vec::new(), Some(0))?;
    println!("corrupted system, r = q1: invariant {}", broken.invariance_check(&[0])?);

    let datum = LocalDatum::supported_at(&sys, 0, 3)?;
    let k = sys.kolyvagin_derivative(&[1])?;
    let rep: Vec<i64> = k.representative.iter().map(|&x| x as i64).collect();
    println!("[kappa(q2)]_q1 = {:?}", bracket_q(&sys, 0, &rep, &datum)?);
    println!("phi_q1(kappa(q2)) = {:?}", phi_q(&sys, 0, &rep, &datum)?);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
