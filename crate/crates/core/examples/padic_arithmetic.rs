//! Fixed-precision 2-adic integers: arithmetic, unit decomposition,
//! logarithm and exponential.

use iwasawa::{PadicContext, Result};

pub fn run() -> Result<()> {
    let ctx = PadicContext::new(2, 40)?;
    let third = ctx.from_ratio(1, 3)?;
    println!("1/3          = {third}");
    println!("3 * (1/3)    = {}", &third * &ctx.from_i64(3));

    let u = ctx.from_i64(-5);
    let d = u.unit_decompose()?;
    println!("-5           = {} * {}", d.sign, d.principal);

    let l = ctx.from_i64(5).log()?;
    println!("log 5        = {l}");
    println!("exp(log 5)   = {}", l.exp()?);

    // dividing by p costs one digit
    let twelve = ctx.from_i64(12);
    println!("12 / 4       = {}", twelve.div_p_pow(2)?);
    println!("digits of 12 = {}", twelve.to_digit_string());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
