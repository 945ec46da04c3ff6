//! The measure on the units attached to a unit power series `g(W)`.

use iwasawa::coleman::{coleman_tilde, coleman_tilde_certified, is_norm_coherent, tilde_via_frobenius, ColemanSeries};
use iwasawa::{IwasawaSeries, PadicContext, Result};

pub fn run() -> Result<()> {
    let ctx = PadicContext::new(2, 64)?;
    let g = ColemanSeries::cyclotomic_unit(&ctx, 3, 16)?;
    println!("g = ((1+W)^3 - 1)/W = {}", g.series);
    println!("norm coherent       = {}", is_norm_coherent(&g)?);

    let (nu, fixed) = coleman_tilde_certified(&g)?;
    println!("tilde g             = {}", nu.series);
    println!("fixed by restriction = {fixed}");
    println!("equals (1 - phi/2) log g: {}", nu.series.agrees_with(&tilde_via_frobenius(&g)?));

    // (1 + W)^a c lies in the kernel
    let k = IwasawaSeries::one_plus_t_pow_int(&ctx, 7, 16).scale_base(&ctx.from_i64(-3));
    let zero = coleman_tilde(&ColemanSeries::new(k, true)?)?;
    println!("tilde((1+W)^7 * -3) is zero: {}", zero.series.is_zero());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
