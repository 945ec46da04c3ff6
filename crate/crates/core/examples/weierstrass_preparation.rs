//! mu and lambda invariants, Weierstrass preparation and division.

use iwasawa::{weierstrass_divide, weierstrass_prepare, IwasawaSeries, PadicContext, Result};

pub fn run() -> Result<()> {
    let ctx = PadicContext::new(2, 48)?;
    let f = IwasawaSeries::from_i64s(&ctx, &[4, 2, 8, 2, 1, 6, 4], 24);
    let ml = f.mu_lambda()?;
    println!("F            = {f}");
    println!("mu, lambda   = {}, {}", ml.mu, ml.lambda);

    let w = weierstrass_prepare(&f)?;
    let p: Vec<String> = w.poly.iter().map(|c| c.to_string()).collect();
    println!("P            = [{}]", p.join(", "));
    println!("distinguished: {}", w.is_distinguished());
    println!("p^mu P U = F : {}", w.reconstruct().agrees_with(&f.truncate(w.unit.len())));

    let two_f = f.scale_base(&ctx.from_i64(8));
    println!("mu(8F)       = {}", two_f.mu_lambda()?.mu);

    let g = IwasawaSeries::from_i64s(&ctx, &[3, 5, 0, 0, 1], 24);
    let (q, r) = weierstrass_divide(&g, &w.poly)?;
    println!("G = q P + r, r = {r}");
    println!("deg q window = {}", q.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
