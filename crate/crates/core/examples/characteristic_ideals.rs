//! Characteristic ideals of finitely presented torsion modules over
//! `Z_2[[T]]`.

use iwasawa::lambda_modules::PresentedModule;
use iwasawa::{IwasawaSeries, PadicContext, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run() -> Result<()> {
    let ctx = PadicContext::new(2, 48)?;
    let s = |c: &[i64]| IwasawaSeries::from_i64s(&ctx, c, 24);

    let a = PresentedModule::elementary(&ctx, &[s(&[2, 1])], true)?;
    let c = PresentedModule::elementary(&ctx, &[s(&[4]), s(&[0, 1])], true)?;
    let glued = PresentedModule::ses_compose(&a, &c, &[vec![s(&[1, 1]), s(&[3])]])?;
    let (ca, cc, cg) = (a.char_ideal()?, c.char_ideal()?, glued.char_ideal()?);
    println!("char(A)         = 2^{} * {:?}", ca.mu, ca.poly.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    println!("char(C)         = 2^{} * {:?}", cc.mu, cc.poly.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    println!("char(extension) = char(A) char(C): {}", cg.agrees_with(&ca.mul(&cc)));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let scrambled = glued.scramble(&mut rng, 10);
    println!("after a unimodular change of basis: {}", scrambled.char_ideal()?.agrees_with(&cg));

    for m in [&a, &c] {
        println!(
            "mu = 0: {}   finitely generated over Z_2: {}",
            m.is_mu_zero()?,
            m.is_finitely_generated_over_zp()?
        );
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
