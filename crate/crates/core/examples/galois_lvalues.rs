//! Measures on `Gamma' x H`, pseudo-measures and `L_p(s, chi)` computed
//! two ways.

use iwasawa::galois::{
    iwasawa_function, lp_value, lp_value_by_series, CharacterOfH, DenominatorTerm, FiniteAbelianGroup, GaloisMeasure,
    PseudoMeasure,
};
use iwasawa::{Coeff, IwasawaSeries, PadicContext, Result};

pub fn run() -> Result<()> {
    let ctx = PadicContext::new(2, 48)?;
    let m = 32;
    let h = FiniteAbelianGroup::new(vec![2, 4])?;
    let nu = GaloisMeasure::from_components(
        &h,
        &ctx,
        m,
        [
            (vec![0, 0], IwasawaSeries::from_i64s(&ctx, &[1, 1], m)),
            (vec![1, 0], IwasawaSeries::from_i64s(&ctx, &[0, 3, 1], m)),
            (vec![0, 1], IwasawaSeries::from_i64s(&ctx, &[5, -2], m)),
            (vec![1, 3], IwasawaSeries::from_i64s(&ctx, &[1, 0, 0, 2], m)),
        ],
    )?;
    let kappa0 = ctx.from_i64(5);
    let pm = PseudoMeasure::from(nu.clone());
    for exps in [[0, 1], [1, 2], [1, 3]] {
        let chi = CharacterOfH::new(&h, &exps)?;
        let a = lp_value(&pm, &chi, &ctx.from_i64(3), &kappa0)?;
        let b = lp_value_by_series(&pm, &chi, &ctx.from_i64(3), &kappa0)?;
        println!("L_p(3, {chi}) = {a}   agrees with series route: {}", a.agrees_with(&b));
    }

    // 1 - sigma^{-1} with chi(h) = 1 and k odd specializes to T times a
    // unit, so it divides its own multiples
    let chi = CharacterOfH::new(&h, &[0, 1])?;
    let term = DenominatorTerm::OneMinusInverse { k: 1, h: vec![1, 0] };
    let multiple = term.apply(&nu)?;
    let q = PseudoMeasure::from(multiple).euler_factor_adjust(1, &[1, 0])?.specialize(&chi)?;
    let want = nu.chi_component(&chi)?;
    println!("Euler factor round trip: {}", q.agrees_with(&want.truncate(q.len())));

    // the same factor does not divide a component with nonzero constant term
    match pm.euler_factor_adjust(1, &[1, 0])?.specialize(&chi) {
        Err(e) => println!("{e}"),
        Ok(_) => println!("divided"),
    }

    let f = iwasawa_function(&pm, &chi)?;
    println!("F(w, {chi}) starts {}, {}", f.coeff(0), f.coeff(1));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
