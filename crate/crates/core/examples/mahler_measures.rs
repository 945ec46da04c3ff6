//! Measures on `Z_2` as Mahler series: Dirac masses, restriction to the
//! units, pushforward, moments and integration.

use iwasawa::mahler::UnitMeasure;
use iwasawa::{PadicContext, Result};

pub fn run() -> Result<()> {
    let ctx = PadicContext::new(2, 64)?;
    let m = 16;
    let nu = UnitMeasure::dirac_int(&ctx, 3, m)
        .add(&UnitMeasure::dirac_int(&ctx, 4, m))?
        .add(&UnitMeasure::dirac_int(&ctx, 5, m).scale(&ctx.from_i64(2)))?;
    println!("total mass          = {}", nu.total_mass());
    println!("unit supported      = {}", nu.is_unit_supported()?);

    let units = nu.restrict_to_units()?;
    println!("mass on units       = {}", units.total_mass());
    println!("restriction fixed   = {}", units.is_unit_supported()?);
    let class = nu.restrict_to_class(3, 2)?;
    println!("mass on 3 + 4Z_2    = {}", class.total_mass());

    let pushed = UnitMeasure::dirac_int(&ctx, 3, m).pushforward_scale(&ctx.from_i64(5))?;
    println!("5_* delta_3 == delta_15: {}", pushed.series.agrees_with(&UnitMeasure::dirac_int(&ctx, 15, m).series));

    let moments: Vec<String> = nu.moments(4)?.iter().map(|x| x.to_string()).collect();
    println!("moments 0..3        = {}", moments.join(", "));

    let s = ctx.from_i64(2);
    let i = units.integrate_unit_character(0, &s, 30)?;
    println!("int <x>^2 over units = {} ({:?})", i.value, i.method);
    println!("by moments           = {}", units.integrate_by_moments(0, &s)?);

    // an infinite measure is integrated by Riemann sums, to the precision
    // the truncated Mahler series can certify
    let infinite = UnitMeasure::dirac_int(&ctx, -5, m);
    match infinite.integrate_unit_character(0, &s, 30) {
        Ok(i) => println!("int over delta_-5    = {} ({:?})", i.value, i.method),
        Err(e) => println!("int over delta_-5: {e}"),
    }
    let i = infinite.integrate_unit_character(0, &s, 3)?;
    println!("to 3 digits          = {} ({:?})", i.value, i.method);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
