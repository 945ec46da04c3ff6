//! Evaluating series at `zeta_{2^n} - 1` and matching the norm valuation
//! against `mu phi(2^n) + lambda`.

use iwasawa::cyclotomic::{eval_at_level, invariant_identity_check, norm_to_base};
use iwasawa::{IwasawaSeries, PadicContext, Result};

pub fn run() -> Result<()> {
    let ctx = PadicContext::new(2, 64)?;
    let m = 32;
    let ev = eval_at_level(&IwasawaSeries::from_i64s(&ctx, &[2, 1], m), 3)?;
    println!("(T + 2) at zeta_8 - 1 = {}", ev.value);
    println!("its norm              = {}", norm_to_base(&ev.value));

    for (name, coeffs) in [("2", vec![2]), ("T", vec![0, 1]), ("T + 2", vec![2, 1]), ("2T^3 + 4 + T^5", vec![4, 0, 0, 2, 0, 1])] {
        let f = IwasawaSeries::from_i64s(&ctx, &coeffs, m);
        for n in 2..=5 {
            let r = invariant_identity_check(&f, n)?;
            println!(
                "F = {name:<15} n = {n}: lhs {:>3}  rhs {:>3}  match {:<5}  phi(2^n) > lambda {}",
                r.lhs, r.rhs, r.matches, r.guaranteed
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
