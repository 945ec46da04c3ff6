//! Measures on `Z_p` through their Mahler series
//! `F(w) = integral (1 + w)^x d nu(x)`.

use serde::{Deserialize, Serialize};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclotomic::{euler_phi, CyclotomicElt, CyclotomicRing};
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicInt, Valuation};
use crate::series::{binomial_mod, Coeff, IwasawaSeries, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Support {
    All,
    Units,
}

/// A measure on `Z_p`, identified with its Mahler series.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitMeasure {
    pub series: IwasawaSeries,
    pub support: Support,
    /// The Mahler expansion stops inside the window: the measure is a
    /// finite combination of Dirac masses at `0, 1, ..., M - 1`.
    pub finite: bool,
}

/// How an integral was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrationMethod {
    /// Sum over the finitely many atoms of a finite measure.
    Atoms,
    /// Riemann sum over residue classes modulo `p^r`.
    Riemann { r: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integral {
    pub value: PadicInt,
    pub method: IntegrationMethod,
}

impl UnitMeasure {
    pub fn new(series: IwasawaSeries) -> Self {
        UnitMeasure { series, support: Support::All, finite: false }
    }

    /// A measure whose Mahler series is the given polynomial.
    pub fn finite(series: IwasawaSeries) -> Self {
        UnitMeasure { series, support: Support::All, finite: true }
    }

    pub fn zero(ctx: &PadicContext, m: usize) -> Self {
        UnitMeasure { series: IwasawaSeries::zero(ctx, m), support: Support::Units, finite: true }
    }

    pub fn context(&self) -> &PadicContext {
        self.series.context()
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Dirac mass at an integer: `(1 + w)^a`, exact.
    pub fn dirac_int(ctx: &PadicContext, a: i64, m: usize) -> Self {
        let support = if a.rem_euclid(ctx.p() as i64) == 0 { Support::All } else { Support::Units };
        UnitMeasure {
            series: IwasawaSeries::one_plus_t_pow_int(ctx, a, m),
            support,
            finite: a >= 0 && (a as u64) < m as u64,
        }
    }

    /// Dirac mass at a p-adic integer: the binomial series `(1 + w)^a`.
    /// A full-precision point whose balanced lift `n` has `n^2 < p^N` is
    /// read as the integer `n`.
    pub fn dirac(a: &PadicInt, m: usize) -> Self {
        let ctx = a.context();
        if let Some(small) = small_integer(a) {
            return Self::dirac_int(ctx, small, m);
        }
        let support = if a.is_unit() { Support::Units } else { Support::All };
        UnitMeasure { series: IwasawaSeries::one_plus_t_pow(a, m), support, finite: false }
    }

    fn combine(&self, other: &Self, series: IwasawaSeries) -> Self {
        let support = if self.support == Support::Units && other.support == Support::Units {
            Support::Units
        } else {
            Support::All
        };
        UnitMeasure { series, support, finite: self.finite && other.finite }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(self.combine(other, self.series.add(&other.series)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(self.combine(other, self.series.sub(&other.series)?))
    }

    pub fn scale(&self, c: &PadicInt) -> Self {
        UnitMeasure { series: self.series.scale_base(c), ..self.clone() }
    }

    /// `nu(Z_p) = F(0)`.
    pub fn total_mass(&self) -> PadicInt {
        self.series.coeff(0)
    }

    /// `sum over zeta^(p^k) = 1 of zeta^(-a) F(zeta (1 + w) - 1)`, grouped by
    /// the exact order of `zeta` and summed through traces.
    fn twisted_root_sum(series: &IwasawaSeries, a: i64, k: u32) -> Result<IwasawaSeries> {
        let ctx = series.context().clone();
        let mut total = series.clone();
        for level in 1..=k {
            let ring = CyclotomicRing::level(&ctx, level)?;
            let h = substitute_root(series, &ring).scale(&ring.zeta_pow(-a));
            let traced = IwasawaSeries::new(ctx.clone(), h.coeffs().iter().map(|c| c.trace()).collect());
            total = total.add(&traced)?;
        }
        Ok(total)
    }

    /// The restriction of the measure to `a + p^k Z_p`.
    ///
    /// Restriction maps `p^j Lambda` into itself, and the `i`-th coefficient
    /// of the restriction of `T^j` has valuation at least
    /// `floor((j - i) / e) - k`, `e = phi(p^k)`. The value is computed with
    /// every coefficient lifted `k` digits wider, and coefficient `i` is
    /// then known to the smallest of `k_j + max(0, floor((j - i) / e) - k)`
    /// over the window and, for an infinite series, the same bound for the
    /// unseen tail.
    pub fn restrict_to_class(&self, a: i64, k: u32) -> Result<Self> {
        let ctx = self.context();
        let m = self.len();
        let wide = ctx.with_digits(ctx.digits() + k);
        let lifted: Vec<PadicInt> = self
            .series
            .coeffs()
            .iter()
            .map(|c| wide.from_bigint(&c.to_bigint()).with_precision(c.precision() + k))
            .collect();
        let sum = Self::twisted_root_sum(&IwasawaSeries::new(wide, lifted), a, k)?;
        let sum = sum.div_p_pow(k).map_err(|e| match e {
            Error::NonIntegral(msg) => Error::NonIntegral(format!("root-of-unity average is not integral: {msg}")),
            other => other,
        })?;
        let e = euler_phi(ctx.p().pow(k)) as usize;
        let gain = |d: usize| ((d / e) as u32).saturating_sub(k);
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let mut bound = ctx.digits();
            for j in i..m {
                bound = bound.min(self.series.coeff(j).precision().saturating_add(gain(j - i)));
            }
            if !self.finite {
                bound = bound.min(gain(m - i));
            }
            out.push(sum.coeff(i).lift_to(ctx)?.with_precision(bound));
        }
        let support = if a.rem_euclid(ctx.p() as i64) != 0 && k >= 1 {
            Support::Units
        } else {
            self.support
        };
        Ok(UnitMeasure { series: IwasawaSeries::new(ctx.clone(), out), support, finite: self.finite })
    }

    /// `F(w) - (1/p) sum_{zeta^p = 1} F(zeta (1 + w) - 1)`, the part of the
    /// measure living on `Z_p^x`. For `p = 2` this is `F(w)/2 - F(-2 - w)/2`.
    pub fn restrict_to_units(&self) -> Result<Self> {
        let on_pzp = self.restrict_to_class(0, 1)?;
        let series = self.series.sub(&on_pzp.series)?;
        Ok(UnitMeasure { series, support: Support::Units, finite: self.finite })
    }

    /// Whether restriction to the units fixes the measure to precision.
    pub fn is_unit_supported(&self) -> Result<bool> {
        Ok(self.restrict_to_units()?.series.agrees_with(&self.series))
    }

    /// Image under `x -> u x`: `F((1 + w)^u - 1)`.
    pub fn pushforward_scale(&self, u: &PadicInt) -> Result<Self> {
        if !u.is_unit() {
            return Err(Error::NonUnit);
        }
        let m = self.len();
        let ctx = self.context();
        let small = small_integer(u);
        let power = match small {
            Some(n) => IwasawaSeries::one_plus_t_pow_int(ctx, n, m),
            None => IwasawaSeries::one_plus_t_pow(u, m),
        };
        let g = power.sub(&IwasawaSeries::one(ctx, m))?;
        let series = if self.finite { self.series.compose_polynomial(&g)? } else { self.series.compose(&g)? };
        let finite = self.finite
            && small.is_some_and(|v| v > 0 && (v as u128) * (self.degree() as u128) < m as u128);
        Ok(UnitMeasure { series, support: self.support, finite })
    }

    fn degree(&self) -> usize {
        self.series.coeffs().iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    /// `integral x^m d nu`, by applying `(1 + w) d/dw` `m` times at `w = 0`.
    pub fn moment(&self, m: usize) -> Result<PadicInt> {
        Ok(self.moments(m + 1)?.pop().expect("at least one moment"))
    }

    /// The first `count` moments.
    pub fn moments(&self, count: usize) -> Result<Vec<PadicInt>> {
        series_moments(&self.series, count)
    }

    /// The atoms of a finite measure: `F(v - 1) = sum_k b_k v^k` puts mass
    /// `b_k` at `k`.
    pub fn atoms(&self) -> Option<Vec<PadicInt>> {
        if !self.finite {
            return None;
        }
        let ctx = self.context();
        let deg = self.degree();
        let coeffs = &self.series.coeffs()[..=deg];
        let mut acc = vec![coeffs[deg].clone()];
        for c in coeffs[..deg].iter().rev() {
            // acc * (v - 1) + c
            let mut next = vec![ctx.zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] = &next[i + 1] + a;
                next[i] = &next[i] - a;
            }
            next[0] = &next[0] + c;
            acc = next;
        }
        Some(acc)
    }

    /// Masses of the classes `a + p^r Z_p`, `0 <= a < p^r`, together with the
    /// number of digits they are certified to once the unseen Mahler
    /// coefficients are accounted for.
    pub fn class_masses(&self, r: u32) -> (Vec<PadicInt>, u32) {
        let ctx = self.context();
        let q = ctx.p().pow(r) as usize;
        let cyc_mul = |acc: &[PadicInt]| -> Vec<PadicInt> {
            (0..q).map(|j| &acc[(j + q - 1) % q] - &acc[j]).collect()
        };
        let coeffs = self.series.coeffs();
        let mut acc = vec![ctx.zero(); q];
        for c in coeffs.iter().rev() {
            acc = cyc_mul(&acc);
            acc[0] = &acc[0] + c;
        }
        let tail = if self.finite {
            ctx.digits()
        } else {
            // smallest valuation among the coefficients of (v - 1)^M in Z[Z/p^r]
            let mut t = vec![ctx.zero(); q];
            t[0] = ctx.one();
            for _ in 0..self.len() {
                t = cyc_mul(&t);
            }
            t.iter().map(|x| x.val_bound()).min().unwrap_or(0)
        };
        let masses = acc.into_iter().map(|x| x.with_precision(tail)).collect();
        (masses, tail)
    }

    fn require_unit_support(&self) -> Result<()> {
        if self.support == Support::Units || self.is_unit_supported()? {
            Ok(())
        } else {
            Err(Error::DomainError("measure is not supported on the units".into()))
        }
    }

    /// `integral omega(x)^j <x>^s d nu` for a measure on `Z_p^x`.
    ///
    /// Finite measures are integrated exactly over their atoms. Otherwise
    /// Riemann sums over classes modulo `p^r` are formed for growing `r`;
    /// each is certified to `min(tail, r + v(s))` digits (class masses are
    /// only known modulo the Mahler tail bound, and `<x>^s` moves by at most
    /// `p^(r + v(s))` inside a class). The best certified sum is returned if
    /// it reaches `target` digits.
    pub fn integrate_unit_character(&self, j: i64, s: &PadicInt, target: u32) -> Result<Integral> {
        self.require_unit_support()?;
        let ctx = self.context().clone();
        let p = ctx.p();
        let integrand = |a: &PadicInt| -> Result<PadicInt> {
            let d = a.unit_decompose()?;
            let sign = if j >= 0 { d.sign.pow(j as u64) } else { d.sign.inv()?.pow(j.unsigned_abs()) };
            Ok(&sign * &d.principal.kappa_power(s)?)
        };
        if let Some(atoms) = self.atoms() {
            let mut acc = ctx.zero();
            for (k, b) in atoms.iter().enumerate() {
                if (k as u64).is_multiple_of(p) {
                    if !b.is_zero() {
                        return Err(Error::DomainError(format!("atom at {k} is not a unit")));
                    }
                    continue;
                }
                acc = &acc + &(b * &integrand(&ctx.from_i64(k as i64))?);
            }
            return Ok(Integral { value: acc, method: IntegrationMethod::Atoms });
        }
        let osc = match s.valuation() {
            Valuation::Exact(v) => v,
            Valuation::AtLeast(_) => ctx.digits(),
        };
        let r0 = if p == 2 { 2 } else { 1 };
        let r_max = if p == 2 { 14 } else { (14.0 / (p as f64).log2()).floor() as u32 }.max(r0);
        let mut best: Option<(u32, u32, PadicInt)> = None;
        for r in r0..=r_max {
            let (masses, tail) = self.class_masses(r);
            let cert = tail.min(r.saturating_add(osc)).min(ctx.digits());
            let mut acc = ctx.zero();
            for (a, m) in masses.iter().enumerate() {
                if (a as u64).is_multiple_of(p) || m.is_zero() {
                    continue;
                }
                acc = &acc + &(m * &integrand(&ctx.from_i64(a as i64))?);
            }
            let acc = acc.with_precision(cert);
            if best.as_ref().is_none_or(|b| cert > b.0) {
                best = Some((cert, r, acc));
            }
            if cert >= target {
                break;
            }
            if tail < r.saturating_add(osc) {
                // finer classes only lower the tail bound further
                break;
            }
        }
        let (cert, r, value) = best.expect("at least one refinement");
        if cert < target {
            return Err(Error::PrecisionExhausted(format!(
                "Riemann sums reach {cert} certified digits (best at r = {r}), {target} requested"
            )));
        }
        Ok(Integral { value, method: IntegrationMethod::Riemann { r } })
    }

    /// The same integral through moments: on each unit class `a` modulo
    /// `q` (`q = 4` for `p = 2`, `q = p` otherwise) write
    /// `<x>^s = sum_k C(s, k) (x / omega(a) - 1)^k` and integrate the
    /// polynomials against the restriction of the measure to the class.
    pub fn integrate_by_moments(&self, j: i64, s: &PadicInt) -> Result<PadicInt> {
        self.require_unit_support()?;
        let ctx = self.context().clone();
        let p = ctx.p();
        let (k0, v0) = if p == 2 { (2u32, 2u32) } else { (1, 1) };
        let q = p.pow(k0) as i64;
        let target = ctx.digits();
        // terms with k v0 - v_p(k!) >= target vanish
        let mut terms = 1usize;
        while (terms as u64) * v0 as u64 - crate::padic::factorial_valuation(terms as u64, p) as u64 <= target as u64 {
            terms += 1;
        }
        let cap = terms.min(self.len());
        let truncation = if cap < terms {
            (cap as u64 * v0 as u64 - crate::padic::factorial_valuation(cap as u64, p) as u64) as u32
        } else {
            target
        };
        let mut total = ctx.zero();
        for a in 1..q {
            if (a as u64).is_multiple_of(p) {
                continue;
            }
            let part = self.restrict_to_class(a, k0)?;
            let mom = part.moments(cap)?;
            let d = ctx.from_i64(a).unit_decompose()?;
            let c = d.sign.inv()?;
            // m_k = integral (c x - 1)^k d part
            let mut acc = ctx.zero();
            let cpow: Vec<PadicInt> = (0..cap).map(|i| c.pow(i as u64)).collect();
            for k in 0..cap {
                let mut mk = ctx.zero();
                let mut binom = ctx.one();
                for i in 0..=k {
                    let term = &(&binom * &cpow[i]) * &mom[i];
                    if (k - i) % 2 == 0 {
                        mk = &mk + &term;
                    } else {
                        mk = &mk - &term;
                    }
                    binom = binom.mul_i64((k - i) as i64).div_exact_small((i + 1) as i64);
                }
                let cs = binomial_of(s, k as u64);
                acc = &acc + &(&cs * &mk);
            }
            let sign = if j >= 0 { d.sign.pow(j as u64) } else { d.sign.inv()?.pow(j.unsigned_abs()) };
            total = &total + &(&sign * &acc);
        }
        Ok(total.with_precision(truncation))
    }
}

/// `F(zeta (1 + w) - 1)` for the integer lifts of the coefficients of `F`,
/// coefficient `i` being `zeta^i sum_{j >= i} binom(j, i) F_j (zeta - 1)^(j - i)`.
/// The sums are formed over `Z` and reduced once; the result carries full
/// precision and the caller decides how much of it is certified.
fn substitute_root(f: &IwasawaSeries, ring: &CyclotomicRing) -> Series<CyclotomicElt> {
    let ctx = f.context();
    let m = f.len();
    let d = ring.degree();
    let modulus = BigInt::from(ctx.power(ctx.digits()).clone());
    let zeta = ring.zeta();
    let step = zeta.minus(&ring.one());
    let mut powers: Vec<Vec<BigInt>> = Vec::with_capacity(m);
    let mut cur = ring.one();
    for _ in 0..m {
        powers.push(cur.coeffs().iter().map(|c| c.to_bigint()).collect());
        cur = cur.times(&step);
    }
    let lifts: Vec<BigInt> = f.coeffs().iter().map(|c| c.to_bigint()).collect();
    let mut row = vec![BigInt::one()];
    let mut acc = vec![vec![BigInt::zero(); d]; m];
    for (j, fj) in lifts.iter().enumerate() {
        if j > 0 {
            let mut next = vec![BigInt::one(); j + 1];
            for i in 1..j {
                next[i] = (&row[i - 1] + &row[i]) % &modulus;
            }
            row = next;
        }
        if fj.is_zero() {
            continue;
        }
        for (i, b) in row.iter().enumerate() {
            let c = fj * b;
            for (a, x) in acc[i].iter_mut().zip(&powers[j - i]) {
                if !x.is_zero() {
                    *a += &c * x;
                }
            }
        }
    }
    let mut zi = ring.one();
    let mut out = Vec::with_capacity(m);
    for coords in acc {
        let e = CyclotomicElt::new(ring.clone(), coords.iter().map(|x| ctx.from_bigint(x)).collect());
        out.push(e.times(&zi));
        zi = zi.times(&zeta);
    }
    Series::new(ring.clone(), out)
}

/// `integral x^m d nu` for `m < count`, where `F` is the Mahler series of
/// `nu`: `(1 + w) d/dw` applied `m` times, then `w = 0`.
pub fn series_moments<R: Coeff>(f: &Series<R>, count: usize) -> Result<Vec<R>> {
    if count > f.len() {
        return Err(Error::PrecisionExhausted(format!(
            "moment {} needs T-precision above {}",
            count - 1,
            f.len()
        )));
    }
    let ctx = f.context().clone();
    let mut c: Vec<R> = f.coeffs().to_vec();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        out.push(c[0].clone());
        // (1 + w) F'(w): coefficient j is (j + 1) c_{j+1} + j c_j
        c = (0..c.len().saturating_sub(1))
            .map(|j| {
                c[j + 1]
                    .scale(&ctx.from_i64(j as i64 + 1))
                    .plus(&c[j].scale(&ctx.from_i64(j as i64)))
            })
            .collect();
    }
    Ok(out)
}

/// The integer a full-precision p-adic integer stands for, when its balanced
/// lift `n` satisfies `n^2 < p^N`.
pub fn small_integer(a: &PadicInt) -> Option<i64> {
    let ctx = a.context();
    if a.precision() != ctx.digits() {
        return None;
    }
    let n = a.to_i64()?;
    let sq = num_bigint::BigUint::from(n.unsigned_abs()).pow(2);
    (&sq < ctx.power(ctx.digits())).then_some(n)
}

/// `C(s, k)` for `s` in `Z_p`.
fn binomial_of(s: &PadicInt, k: u64) -> PadicInt {
    let ctx = s.context();
    if k == 0 {
        return ctx.one();
    }
    let prec = s.precision();
    binomial_mod(ctx, s.residue(), k, prec).with_precision(prec.saturating_sub(crate::padic::ilog(k, ctx.p())))
}

trait DivExactSmall {
    fn div_exact_small(&self, d: i64) -> Self;
}

impl DivExactSmall for PadicInt {
    /// Division of an integer-valued binomial by a small integer that is
    /// known to divide it exactly.
    fn div_exact_small(&self, d: i64) -> PadicInt {
        let b = self.to_bigint();
        let ctx = self.context();
        if self.precision() == ctx.digits() && (&b % d) == num_bigint::BigInt::from(0) {
            ctx.from_bigint(&(b / d))
        } else {
            let v = crate::padic::u64_valuation(d.unsigned_abs(), ctx.p());
            let unit = d / (ctx.p() as i64).pow(v);
            let q = self.div_p_pow(v).expect("binomial divisibility");
            &q * &ctx.from_i64(unit).inv().expect("unit")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PadicContext {
        PadicContext::two_adic()
    }

    #[test]
    fn dirac_series() {
        let c = ctx();
        assert_eq!(UnitMeasure::dirac_int(&c, 0, 8).series, IwasawaSeries::from_i64s(&c, &[1], 8));
        assert_eq!(UnitMeasure::dirac_int(&c, 1, 8).series, IwasawaSeries::from_i64s(&c, &[1, 1], 8));
        assert_eq!(UnitMeasure::dirac_int(&c, 3, 8).series, IwasawaSeries::from_i64s(&c, &[1, 3, 3, 1], 8));
    }

    #[test]
    fn restriction_examples() {
        let c = ctx();
        let r = UnitMeasure::dirac_int(&c, 4, 16).restrict_to_units().unwrap();
        assert!(r.series.is_zero());
        let d3 = UnitMeasure::dirac_int(&c, 3, 16);
        assert!(d3.restrict_to_units().unwrap().series.agrees_with(&d3.series));
        let d5 = UnitMeasure::dirac_int(&c, 5, 16);
        let mix = UnitMeasure::dirac_int(&c, 2, 16).add(&d5).unwrap();
        assert!(mix.restrict_to_units().unwrap().series.agrees_with(&d5.series));
    }

    #[test]
    fn restriction_of_infinite_dirac() {
        let c = ctx();
        let d = UnitMeasure::dirac_int(&c, -5, 40);
        let r = d.restrict_to_units().unwrap();
        assert!(r.series.agrees_with(&d.series));
        let e = UnitMeasure::dirac_int(&c, -6, 40).restrict_to_units().unwrap();
        assert!(e.series.is_zero());
    }

    #[test]
    fn odd_prime_restriction() {
        let c = PadicContext::new(3, 20).unwrap();
        let d = UnitMeasure::dirac_int(&c, 5, 12).add(&UnitMeasure::dirac_int(&c, 6, 12)).unwrap();
        let r = d.restrict_to_units().unwrap();
        assert_eq!(r.series, UnitMeasure::dirac_int(&c, 5, 12).series);
    }

    #[test]
    fn pushforward_examples() {
        let c = ctx();
        let p = UnitMeasure::dirac_int(&c, 1, 16).pushforward_scale(&c.from_i64(3)).unwrap();
        assert_eq!(p.series, UnitMeasure::dirac_int(&c, 3, 16).series);
        let z = UnitMeasure::dirac_int(&c, 0, 16).pushforward_scale(&c.from_i64(7)).unwrap();
        assert_eq!(z.series, UnitMeasure::dirac_int(&c, 0, 16).series);
        let u = c.from_i64(5);
        let nu = UnitMeasure::dirac_int(&c, 11, 16);
        let back = nu.pushforward_scale(&u).unwrap().pushforward_scale(&u.inv().unwrap()).unwrap();
        assert!(back.series.agrees_with(&nu.series));
    }

    #[test]
    fn moment_examples() {
        let c = ctx();
        assert_eq!(UnitMeasure::dirac_int(&c, 3, 16).moment(2).unwrap(), c.from_i64(9));
        assert_eq!(UnitMeasure::dirac_int(&c, 7, 16).moment(0).unwrap(), c.one());
        let two_three = UnitMeasure::dirac_int(&c, 2, 16).add(&UnitMeasure::dirac_int(&c, 3, 16)).unwrap();
        assert_eq!(two_three.moment(1).unwrap(), c.from_i64(5));
        for (m, v) in UnitMeasure::dirac_int(&c, -3, 20).moments(20).unwrap().iter().enumerate() {
            assert!(v.agrees_with(&c.from_i64(-3).pow(m as u64)));
        }
    }

    #[test]
    fn integration_examples() {
        let c = ctx();
        let d3 = UnitMeasure::dirac_int(&c, 3, 16);
        let v = d3.integrate_unit_character(0, &c.one(), 64).unwrap();
        assert_eq!(v.value, c.from_i64(-3));
        let v = d3.integrate_unit_character(1, &c.zero(), 64).unwrap();
        assert_eq!(v.value, c.from_i64(-1));
        let d5 = UnitMeasure::dirac_int(&c, 5, 16);
        assert_eq!(d5.integrate_unit_character(0, &c.from_i64(2), 64).unwrap().value, c.from_i64(25));
    }

    #[test]
    fn moments_route_matches_atoms() {
        let c = ctx();
        let nu = UnitMeasure::dirac_int(&c, 3, 64)
            .add(&UnitMeasure::dirac_int(&c, 13, 64).scale(&c.from_i64(5)))
            .unwrap();
        for (j, s) in [(0, 1), (1, 0), (0, 3), (1, -2), (0, 0)] {
            let s = c.from_i64(s);
            let a = nu.integrate_unit_character(j, &s, 64).unwrap().value;
            let b = nu.integrate_by_moments(j, &s).unwrap();
            assert!(a.agrees_with(&b), "j = {j}, s = {s}: {a} vs {b}");
            assert!(b.precision() >= 20);
        }
    }

    #[test]
    fn riemann_sums_on_an_infinite_measure() {
        let c = ctx();
        let nu = UnitMeasure::dirac_int(&c, -3, 64);
        let v = nu.integrate_unit_character(0, &c.one(), 4).unwrap();
        // -3 = 1 mod 4, so <-3> = -3
        assert!(v.value.agrees_with(&c.from_i64(-3)));
        assert!(matches!(nu.integrate_unit_character(0, &c.one(), 60), Err(Error::PrecisionExhausted(_))));
    }
}
