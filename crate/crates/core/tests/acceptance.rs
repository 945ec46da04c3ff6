//! The acceptance suite: eight criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test --test acceptance`. The process exits non-zero if
//! any criterion fails.

use std::error::Error as StdError;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use iwasawa::coleman::{coleman_tilde, ColemanSeries};
use iwasawa::cyclotomic::{integer_norm, invariant_identity_check};
use iwasawa::euler::{bracket_q, DerivativeGroup, LocalDatum, SyntheticEulerSystem};
use iwasawa::galois::{
    lp_value, lp_value_by_series, CharacterOfH, DenominatorTerm, FiniteAbelianGroup, GaloisMeasure, PseudoMeasure,
};
use iwasawa::lambda_modules::PresentedModule;
use iwasawa::mahler::UnitMeasure;
use iwasawa::{Coeff, Error, IwasawaSeries, PadicContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, Box<dyn StdError>>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+).into());
        }
    };
}

fn random_series(rng: &mut ChaCha8Rng, ctx: &PadicContext, m: usize, bound: i64) -> IwasawaSeries {
    let c: Vec<i64> = (0..m).map(|_| rng.gen_range(-bound..=bound)).collect();
    IwasawaSeries::from_i64s(ctx, &c, m)
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// A monic polynomial of degree `lambda` with even lower coefficients.
fn distinguished(rng: &mut ChaCha8Rng, lambda: usize) -> Vec<i64> {
    let mut p: Vec<i64> = (0..lambda).map(|_| 2 * rng.gen_range(-4..=4)).collect();
    p.push(1);
    p
}

/// Integer coefficients of `f(x - 1)`.
fn shift_minus_one(f: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; f.len()];
    let mut power = vec![1i64];
    for &c in f {
        for (o, x) in out.iter_mut().zip(&power) {
            *o += c * x;
        }
        let mut next = vec![0i64; power.len() + 1];
        for (i, &x) in power.iter().enumerate() {
            next[i + 1] += x;
            next[i] -= x;
        }
        power = next;
    }
    out
}

/// `ord_2` of the norm of `f(zeta_{2^n} - 1)`, exactly over the integers.
fn oracle_norm_valuation(f: &[i64], n: u32) -> u64 {
    integer_norm(&shift_minus_one(f), 1 << n).trailing_zeros().expect("nonzero norm")
}

fn criterion_1() -> Outcome {
    let ctx = PadicContext::new(2, 64)?;
    for (f, n, want) in [(vec![2i64], 3u32, 4u64), (vec![0, 1], 3, 1), (vec![2, 1], 2, 1), (vec![2, 1], 5, 1)] {
        let rep = invariant_identity_check(&IwasawaSeries::from_i64s(&ctx, &f, 16), n)?;
        let oracle = oracle_norm_valuation(&f, n);
        ensure!(rep.lhs == want && rep.rhs == want && oracle == want, "spot value {f:?} at n = {n}: {rep:?}, oracle {oracle}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut checks, mut oracle_checks) = (0, 0);
    for case in 0..200 {
        let mu = rng.gen_range(0..=3u32);
        let lambda = rng.gen_range(0..=8usize);
        let p = distinguished(&mut rng, lambda);
        // every fourth case has a polynomial unit part, checked against the
        // exact integer norm as well
        let polynomial = case % 4 == 0;
        let unit_len = if polynomial { 3 } else { 3 * 128 + 16 };
        let mut u: Vec<i64> = (0..unit_len).map(|_| rng.gen_range(-20..=20)).collect();
        u[0] = 2 * rng.gen_range(-10..=10) + 1;
        let f: Vec<i64> = poly_mul(&p, &u).into_iter().map(|c| c << mu).collect();
        for n in 4..=8u32 {
            if (1u64 << (n - 1)) <= lambda as u64 {
                continue;
            }
            // the norm valuation is at most 3 phi(2^n) + 8, so the window
            // and the digits both have room above it
            let window = 3 * (1 << (n - 1)) + 8 + 8;
            let level_ctx = PadicContext::new(2, window as u32)?;
            let series = IwasawaSeries::from_i64s(&level_ctx, &f[..window.min(f.len())], window);
            let rep = invariant_identity_check(&series, n)?;
            ensure!(rep.mu == mu && rep.lambda == lambda, "case {case}: read mu {} lambda {}, built {mu} {lambda}", rep.mu, rep.lambda);
            ensure!(rep.matches, "case {case} (mu {mu}, lambda {lambda}) at n = {n}: {} vs {}", rep.lhs, rep.rhs);
            checks += 1;
            if polynomial && n <= 6 {
                let oracle = oracle_norm_valuation(&f, n);
                ensure!(oracle == rep.rhs, "case {case} at n = {n}: oracle {oracle}, computed {}", rep.rhs);
                oracle_checks += 1;
            }
        }
    }
    Ok(format!("{checks} level checks on 200 series, {oracle_checks} against the integer norm, spot values ok"))
}

/// Coefficient `i` of a restriction computed in a window of `W` terms is
/// certified to about `min(N, (W - i) / (p - 1) - 1)` digits, so the checks
/// below work in a window of `M + (p - 1)(N + 3)` terms and compare the
/// first `M` coefficients.
fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut finite = 0;
    for case in 0..500 {
        let p = [2u64, 3, 5][case % 3];
        let digits = rng.gen_range(8..=40);
        let ctx = PadicContext::new(p, digits)?;
        let m = rng.gen_range(1..=24);
        let wide = m + (p as usize - 1) * (digits as usize + 3);
        let nu = if case % 2 == 0 {
            finite += 1;
            let c: Vec<i64> = (0..m).map(|_| rng.gen_range(-1000..=1000)).collect();
            UnitMeasure::finite(IwasawaSeries::from_i64s(&ctx, &c, wide))
        } else {
            UnitMeasure::new(random_series(&mut rng, &ctx, wide, 1000))
        };
        let once = nu.restrict_to_units()?;
        let twice = once.restrict_to_units()?;
        ensure!(once.series.truncate(m) == twice.series.truncate(m), "case {case}: restriction is not idempotent");
        ensure!(once.series.truncate(m).min_precision() == digits, "case {case}: restriction lost precision");
    }
    let ctx = PadicContext::new(2, 32)?;
    let m = 16;
    let wide = m + 32 + 3;
    let zero = IwasawaSeries::zero(&ctx, m);
    for a in -(1i64 << 10)..=(1 << 10) {
        let r = UnitMeasure::dirac_int(&ctx, a, wide).restrict_to_units()?.series.truncate(m);
        if a % 2 == 0 {
            ensure!(r == zero, "dirac at {a} does not restrict to zero");
        } else {
            ensure!(r == UnitMeasure::dirac_int(&ctx, a, m).series, "dirac at {a} is not fixed");
        }
    }
    Ok(format!("500 random measures ({finite} finite), 2049 Dirac measures"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in 0..100 {
        let p = [2u64, 3][case % 2];
        let ctx = PadicContext::new(p, 40)?;
        let a = rng.gen_range(-40..=40);
        let c = loop {
            let c = rng.gen_range(-500i64..=500);
            if c % p as i64 != 0 {
                break c;
            }
        };
        let g = IwasawaSeries::one_plus_t_pow_int(&ctx, a, 20).scale_base(&ctx.from_i64(c));
        let nu = coleman_tilde(&ColemanSeries::new(g, false)?)?;
        ensure!(nu.series.is_zero(), "case {case}: tilde((1 + W)^{a} * {c}) = {}", nu.series);
    }
    // coefficient i of the output depends on the unseen tail of g, so it is
    // known to about (M - i) / (p - 1) digits; the low coefficients carry
    // the check
    let mut verified = u32::MAX;
    for case in 0..100 {
        let p = [2u64, 3][case % 2];
        let ctx = PadicContext::new(p, 40)?;
        let mut g = random_series(&mut rng, &ctx, 32, 50).coeffs().to_vec();
        if !g[0].is_unit() {
            g[0] = &g[0] + &ctx.one();
        }
        let g = ColemanSeries::new(IwasawaSeries::new(ctx.clone(), g), false)?;
        let nu = coleman_tilde(&g)?;
        let restricted = UnitMeasure::new(nu.series.clone()).restrict_to_units()?;
        ensure!(restricted.series.agrees_with(&nu.series), "case {case}: restriction moves the output");
        let known = restricted.series.coeff(0).precision().min(nu.series.coeff(0).precision());
        ensure!(known >= 10, "case {case}: only {known} digits of the total mass are tracked");
        verified = verified.min(known);
    }
    Ok(format!("100 kernel cases, 100 random g fixed by restriction (total mass checked to >= {verified} digits)"))
}

fn random_measure(rng: &mut ChaCha8Rng, group: &FiniteAbelianGroup, ctx: &PadicContext, m: usize) -> iwasawa::Result<GaloisMeasure> {
    let comps: Vec<_> = group.elements().into_iter().map(|h| (h, random_series(rng, ctx, m, 1000))).collect();
    GaloisMeasure::from_components(group, ctx, m, comps)
}

fn random_element(rng: &mut ChaCha8Rng, group: &FiniteAbelianGroup) -> Vec<u64> {
    group.orders.iter().map(|&d| rng.gen_range(0..d)).collect()
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let ctx = PadicContext::new(2, 40)?;
    let group = FiniteAbelianGroup::new(vec![2, 4])?;
    let m = 16;
    for case in 0..100 {
        let nu = random_measure(&mut rng, &group, &ctx, m)?;
        // N alpha even, so N alpha - chi(h) (1 + T)^k has unit constant term
        let n = 2 * rng.gen_range(1..=10) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let k = rng.gen_range(-5..=5);
        let h = random_element(&mut rng, &group);
        let nu_alpha = DenominatorTerm::Alpha { n, k, h: h.clone() }.apply(&nu)?;
        let pm = PseudoMeasure::recover_from_alpha(&nu_alpha, n, k, &h)?;
        for chi in group.characters() {
            let got = pm.specialize(&chi)?;
            let want = nu.chi_component(&chi)?;
            ensure!(got == want, "case {case}, chi {chi}: recovered component differs");
        }
    }
    let ctx3 = PadicContext::new(3, 40)?;
    let group3 = FiniteAbelianGroup::new(vec![2, 2])?;
    for case in 0..100 {
        let nu = random_measure(&mut rng, &group3, &ctx3, m)?;
        let k = [-4, -2, -1, 1, 2, 4][rng.gen_range(0..6)];
        let h = random_element(&mut rng, &group3);
        let term = DenominatorTerm::OneMinusInverse { k, h: h.clone() };
        let numerator = term.apply(&nu)?;
        let pm = PseudoMeasure::from(numerator.clone()).euler_factor_adjust(k, &h)?;
        for chi in group3.characters() {
            let quotient = pm.specialize(&chi)?;
            let den = term.specialize(&chi, quotient.ring(), quotient.len());
            let back = quotient.mul(&den)?;
            let want = numerator.chi_component(&chi)?.truncate(back.len());
            ensure!(back == want, "case {case}, chi {chi}: multiply-back differs");
            ensure!(
                quotient.agrees_with(&nu.chi_component(&chi)?.truncate(quotient.len())),
                "case {case}, chi {chi}: quotient is not the original component"
            );
        }
    }
    let mut raised = 0;
    for case in 0..100 {
        let (ctx, group) = if case % 2 == 0 { (&ctx, &group) } else { (&ctx3, &group3) };
        let nu = random_measure(&mut rng, group, ctx, m)?;
        let h = random_element(&mut rng, group);
        let chars: Vec<CharacterOfH> = group.characters().into_iter().filter(|c| c.exponent_at(&h) == 0).collect();
        let chi = &chars[rng.gen_range(0..chars.len())];
        if nu.chi_component(chi)?.coeff(0).is_zero() {
            continue;
        }
        let k = if h.iter().any(|&x| x != 0) && case % 5 == 0 { 0 } else { rng.gen_range(1..=6) };
        let pm = PseudoMeasure::from(nu).euler_factor_adjust(k, &h)?;
        match pm.specialize(chi) {
            Err(Error::NotDivisible { .. }) => raised += 1,
            other => return Err(format!("case {case}: expected NotDivisible, got {other:?}").into()),
        }
    }
    ensure!(raised >= 90, "only {raised} degenerate cases were generated");
    let degenerate = PseudoMeasure::from(GaloisMeasure::zero(&group, &ctx, m)).euler_factor_adjust(0, &[0, 0]);
    ensure!(matches!(degenerate, Err(Error::DegenerateDenominator(_))), "1 - 1 accepted as a denominator");
    Ok(format!("100 recoveries from alpha, 100 multiply-backs, {raised} NotDivisible raised"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let digits = 64;
    let ctx = PadicContext::new(2, digits)?;
    let group = FiniteAbelianGroup::new(vec![2, 4])?;
    let kappa0 = ctx.from_i64(5);
    let mut worst = u32::MAX;
    for case in 0..50 {
        let nu = PseudoMeasure::from(random_measure(&mut rng, &group, &ctx, 72)?);
        for chi in group.characters() {
            for s in [0i64, 1, -1, 2, -2, 3] {
                let s_p = ctx.from_i64(s);
                let a = lp_value(&nu, &chi, &s_p, &kappa0)?;
                let b = lp_value_by_series(&nu, &chi, &s_p, &kappa0)?;
                let known = a.precision().min(b.precision());
                ensure!(a.agrees_with(&b), "case {case}, chi {chi}, s = {s}: {a} vs {b}");
                ensure!(known >= 40, "case {case}, chi {chi}, s = {s}: only {known} digits");
                worst = worst.min(known);
            }
        }
    }
    Ok(format!("50 measures x 8 characters x 6 values of s agree to >= {worst} digits"))
}

fn random_factor(rng: &mut ChaCha8Rng, ctx: &PadicContext, m: usize, mu: u32) -> IwasawaSeries {
    let lambda = rng.gen_range(0..=3);
    let p = distinguished(rng, lambda);
    let u = [2 * rng.gen_range(-3..=3) + 1, rng.gen_range(-3..=3)];
    let f: Vec<i64> = poly_mul(&p, &u).into_iter().map(|c| c << mu).collect();
    IwasawaSeries::from_i64s(ctx, &f, m)
}

fn random_module(rng: &mut ChaCha8Rng, ctx: &PadicContext, m: usize, rank: usize, mus: &[u32]) -> iwasawa::Result<PresentedModule> {
    let gs: Vec<IwasawaSeries> = (0..rank).map(|i| random_factor(rng, ctx, m, mus[i % mus.len()])).collect();
    PresentedModule::elementary(ctx, &gs, true)
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let ctx = PadicContext::new(2, 48)?;
    let m = 32;
    for case in 0..100 {
        let (ra, rc) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let (mu_a, mu_c) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
        let a = random_module(&mut rng, &ctx, m, ra, &[mu_a])?;
        let c = random_module(&mut rng, &ctx, m, rc, &[mu_c])?;
        let glue: Vec<Vec<IwasawaSeries>> = (0..ra)
            .map(|_| (0..rc).map(|_| IwasawaSeries::from_i64s(&ctx, &[rng.gen_range(-5..=5), rng.gen_range(-5..=5)], m)).collect())
            .collect();
        let ext = PresentedModule::ses_compose(&a, &c, &glue)?;
        let (ca, cc, ce) = (a.char_ideal()?, c.char_ideal()?, ext.char_ideal()?);
        ensure!(ce.agrees_with(&ca.mul(&cc)), "case {case}: char of the extension is not the product");
        let scrambled = ext.scramble(&mut rng, 8);
        ensure!(scrambled.char_ideal()?.agrees_with(&ce), "case {case}: scrambling changed the characteristic ideal");
    }
    Ok("100 extensions, 100 scrambles".into())
}

fn subsets(s: usize) -> Vec<Vec<usize>> {
    (0usize..1 << s).map(|m| (0..s).filter(|i| m & (1 << i) != 0).collect()).collect()
}

fn criterion_7() -> Outcome {
    let mut telescopes = 0;
    for l in 1..=6 {
        for (s, delta) in [(1, vec![]), (2, vec![2]), (2, vec![3])] {
            let primes: Vec<String> = (1..=s).map(|i| format!("q{i}")).collect();
            let m = 1i64 << l;
            let frob: Vec<Vec<i64>> = (0..s)
                .map(|i| (0..s + delta.len()).map(|j| if j < s && j != i { (3 * j as i64 + 1) % m } else { 0 }).collect())
                .collect();
            let g = DerivativeGroup::new(l, primes.clone(), FiniteAbelianGroup::new(delta)?, frob)?;
            for q in &primes {
                ensure!(g.telescope_check(q)?, "telescope identity fails at l = {l}, {q}");
                telescopes += 1;
            }
        }
    }
    let mut brackets = 0;
    for seed in 0..100u64 {
        let s = 1 + (seed % 3) as usize;
        let l = 1 + ((seed / 3) % 4) as u32;
        let sys = SyntheticEulerSystem::random(seed, s, l)?;
        let data: Vec<LocalDatum> = (0..s).map(|q| LocalDatum::supported_at(&sys, q, seed * 31 + q as u64)).collect::<iwasawa::Result<_>>()?;
        for d in &data {
            ensure!(d.is_well_defined(&sys), "seed {seed}: local datum does not kill the relations");
        }
        for r in subsets(s) {
            ensure!(sys.invariance_check(&r)?, "seed {seed} (s = {s}, l = {l}): kappa({r:?}) is not invariant");
            let k = sys.kolyvagin_derivative(&r)?;
            let rep: Vec<i64> = k.representative.iter().map(|&x| x as i64).collect();
            for q in (0..s).filter(|q| !r.contains(q)) {
                let b = bracket_q(&sys, q, &rep, &data[q])?;
                ensure!(b.iter().all(|&x| x == 0), "seed {seed}: [kappa({r:?})]_q{} = {b:?}", q + 1);
                brackets += 1;
            }
        }
    }
    for seed in 0..100u64 {
        let s = 1 + (seed % 3) as usize;
        let l = 1 + ((seed / 3) % 4) as u32;
        let good = SyntheticEulerSystem::random(1000 + seed, s, l)?;
        let q = (seed as usize / 12) % s;
        let bad = SyntheticEulerSystem::new(good.group().clone(), Vec::new(), Some(q))?;
        ensure!(!bad.invariance_check(&[q])?, "corrupted control {seed} (s = {s}, l = {l}) passes");
    }
    Ok(format!("{telescopes} telescopes, 100 systems invariant, 100 controls rejected, {brackets} brackets vanish"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let ctx = PadicContext::new(2, 40)?;
    let mut with_mu = 0;
    for case in 0..200 {
        let rank = rng.gen_range(1..=3);
        let mus: Vec<u32> = (0..rank).map(|_| if rng.gen_bool(0.3) { rng.gen_range(1..=2) } else { 0 }).collect();
        let module = random_module(&mut rng, &ctx, 24, rank, &mus)?;
        let expected = mus.iter().all(|&x| x == 0);
        let mu_zero = module.is_mu_zero()?;
        let fg = module.is_finitely_generated_over_zp()?;
        ensure!(mu_zero == fg && fg == expected, "case {case} (mu {mus:?}): mu zero {mu_zero}, finitely generated {fg}");
        with_mu += usize::from(!expected);
    }
    Ok(format!("200 modules, {with_mu} with positive mu"))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 8] = [
        ("invariants from norms", 60, criterion_1),
        ("restriction to the units", 10, criterion_2),
        ("Coleman kernel and support", 30, criterion_3),
        ("pseudo-measure round trips", 20, criterion_4),
        ("two routes to L_p", 60, criterion_5),
        ("characteristic ideals", 60, criterion_6),
        ("Kolyvagin derivatives", 120, criterion_7),
        ("mu = 0 against finite generation", 5, criterion_8),
    ];
    // optional arguments select criteria by number
    let chosen: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        if !chosen.is_empty() && !chosen.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let timing = format!("{:.1}s of {budget}s", took.as_secs_f64());
        let line = match (&outcome, took <= Duration::from_secs(*budget)) {
            (Ok(detail), true) => format!("PASS  {detail} ({timing})"),
            (Ok(detail), false) => format!("FAIL  over time budget: {detail} ({timing})"),
            (Err(e), _) => format!("FAIL  {e} ({timing})"),
        };
        if !line.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {} [{name}]: {line}", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
