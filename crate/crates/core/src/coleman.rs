//! The logarithmic operator `g -> log g - (1/p) sum_{zeta^p = 1} log g(zeta (1 + W) - 1)`
//! attached to power series on the formal multiplicative group.
//!
//! Roots of unity have logarithm zero throughout.

use crate::cyclotomic::{norm_to_base, CyclotomicElt, CyclotomicRing};
use crate::error::{Error, Result};
use crate::mahler::{Support, UnitMeasure};
use crate::padic::{ilog, u64_valuation, PadicContext, PadicInt};
use crate::series::{Coeff, IwasawaSeries, Series};

/// `W + w + W w`.
pub fn formal_add<R: Coeff>(a: &Series<R>, b: &Series<R>) -> Result<Series<R>> {
    a.add(b)?.add(&a.mul(b)?)
}

/// A power series `g(W)` with unit constant term.
#[derive(Debug, Clone, PartialEq)]
pub struct ColemanSeries {
    pub series: IwasawaSeries,
    /// Coefficients beyond the window are exactly zero.
    pub polynomial: bool,
}

impl ColemanSeries {
    pub fn new(series: IwasawaSeries, polynomial: bool) -> Result<Self> {
        if series.is_empty() || !series.coeff(0).is_unit() {
            return Err(Error::DomainError("constant term is not a unit".into()));
        }
        Ok(ColemanSeries { series, polynomial })
    }

    /// `((1 + W)^a - 1) / W` for `a >= 1` prime to `p`.
    pub fn cyclotomic_unit(ctx: &PadicContext, a: i64, m: usize) -> Result<Self> {
        if a < 1 || (a as u64).is_multiple_of(ctx.p()) {
            return Err(Error::DomainError(format!("exponent {a} must be positive and prime to p")));
        }
        let full = IwasawaSeries::one_plus_t_pow_int(ctx, a, m + 1);
        let coeffs = full.coeffs()[1..].to_vec();
        Self::new(IwasawaSeries::new(ctx.clone(), coeffs), true)
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn context(&self) -> &PadicContext {
        self.series.context()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(ColemanSeries {
            series: self.series.mul(&other.series)?,
            polynomial: self.polynomial && other.polynomial && {
                let deg = |s: &IwasawaSeries| s.coeffs().iter().rposition(|c| !c.is_zero()).unwrap_or(0);
                deg(&self.series) + deg(&other.series) < self.len().min(other.len())
            },
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(ColemanSeries { series: self.series.inverse()?, polynomial: false })
    }

    /// `g(zeta_p (1 + W) - 1)` over `Z_p[zeta_p]`.
    fn twist(&self) -> Result<Series<CyclotomicElt>> {
        let ring = CyclotomicRing::level(self.context(), 1)?;
        let m = self.len();
        let g = Series::<CyclotomicElt>::extend_scalars(&ring, &self.series);
        let z = ring.zeta();
        let arg = Series::from_poly(ring.clone(), vec![z.minus(&ring.one()), z], m);
        if self.polynomial {
            g.compose_polynomial(&arg)
        } else {
            g.compose(&arg)
        }
    }
}

/// The scaling exponent `E` with `p^E log(1 + h)` integral modulo `W^m`.
fn log_scale(p: u64, m: usize) -> u32 {
    if m <= 1 {
        0
    } else {
        ilog(m as u64 - 1, p)
    }
}

/// `p^E log(f / f(0))` for `f` with unit constant term.
pub fn scaled_log<R: Coeff>(f: &Series<R>, e: u32) -> Result<Series<R>> {
    let ctx = f.context().clone();
    let p = ctx.p();
    let m = f.len();
    let u = f.coeff(0).inverse()?;
    let h = f.scale(&u).sub(&Series::one(f.ring(), m))?;
    let coeff = |n: u64| -> Result<PadicInt> {
        let v = u64_valuation(n, p);
        let unit = ctx.from_i64((n / p.pow(v)) as i64).inv()?;
        let c = unit.mul_p_pow(e - v);
        Ok(if n % 2 == 1 { c } else { -c })
    };
    if m <= 1 {
        return Ok(Series::zero(f.ring(), m));
    }
    let mut acc = Series::constant(R::from_base(f.ring(), &coeff(m as u64 - 1)?), m);
    for n in (1..m as u64 - 1).rev() {
        acc = h.mul(&acc)?;
        acc.coeffs_mut()[0] = acc.coeff(0).plus(&R::from_base(f.ring(), &coeff(n)?));
    }
    h.mul(&acc)
}

/// Logarithm of a unit of `Z_p` with roots of unity sent to zero.
fn unit_log(u: &PadicInt) -> Result<PadicInt> {
    u.unit_decompose()?.principal.log()
}

/// The Mahler series of the measure attached to `g`.
pub fn coleman_tilde(g: &ColemanSeries) -> Result<UnitMeasure> {
    let ctx = g.context().clone();
    let p = ctx.p();
    let m = g.len();
    let e = log_scale(p, m);
    let a = scaled_log(&g.series, e)?;
    let twisted = g.twist()?;
    let b = scaled_log(&twisted, e)?;
    let trace_b = IwasawaSeries::new(ctx.clone(), b.coeffs().iter().map(|c| c.trace()).collect());
    let body = a.scale_base(&ctx.from_i64(p as i64 - 1)).sub(&trace_b)?;
    let mut series = body.div_p_pow(e + 1).map_err(non_integral)?;
    let norm = norm_to_base(&twisted.coeff(0));
    let constant = (&unit_log(&g.series.coeff(0))?.mul_i64(p as i64 - 1) - &unit_log(&norm)?)
        .div_p_pow(1)
        .map_err(non_integral)?;
    series.coeffs_mut()[0] = &series.coeff(0) + &constant;
    Ok(UnitMeasure { series, support: Support::Units, finite: false })
}

fn non_integral(err: Error) -> Error {
    match err {
        Error::NonIntegral(msg) => Error::NonIntegral(format!("series is not norm-coherent: {msg}")),
        other => other,
    }
}

/// `coleman_tilde` together with the check that the output is fixed by
/// restriction to the units.
pub fn coleman_tilde_certified(g: &ColemanSeries) -> Result<(UnitMeasure, bool)> {
    let nu = coleman_tilde(g)?;
    let fixed = UnitMeasure::new(nu.series.clone()).is_unit_supported()?;
    Ok((nu, fixed))
}

/// `(1 - phi / p) log g` with `phi f (W) = f((1 + W)^p - 1)`. For
/// norm-coherent `g` this equals `coleman_tilde(g)`.
pub fn tilde_via_frobenius(g: &ColemanSeries) -> Result<IwasawaSeries> {
    let ctx = g.context().clone();
    let p = ctx.p();
    let m = g.len();
    let e = log_scale(p, m);
    let a = scaled_log(&g.series, e)?;
    let frob = IwasawaSeries::one_plus_t_pow_int(&ctx, p as i64, m).sub(&IwasawaSeries::one(&ctx, m))?;
    let body = a.scale_base(&ctx.from_i64(p as i64)).sub(&a.compose(&frob)?)?;
    let mut series = body.div_p_pow(e + 1).map_err(non_integral)?;
    let constant = unit_log(&g.series.coeff(0))?.mul_i64(p as i64 - 1).div_p_pow(1)?;
    series.coeffs_mut()[0] = &series.coeff(0) + &constant;
    Ok(series)
}

/// Whether `prod_{zeta^p = 1} g(zeta (1 + W) - 1) = g((1 + W)^p - 1)` to precision.
pub fn is_norm_coherent(g: &ColemanSeries) -> Result<bool> {
    let ctx = g.context().clone();
    let p = ctx.p();
    let m = g.len();
    let twisted = g.twist()?;
    let mut prod = Series::<CyclotomicElt>::extend_scalars(twisted.ring(), &g.series);
    for j in 1..p as i64 {
        let conj = twisted.map(|c| c.conjugate(j));
        prod = prod.mul(&conj)?;
    }
    let mut coeffs = Vec::with_capacity(m);
    for c in prod.coeffs() {
        match c.as_base() {
            Some(x) => coeffs.push(x),
            None => return Ok(false),
        }
    }
    let lhs = IwasawaSeries::new(ctx.clone(), coeffs);
    let frob = IwasawaSeries::one_plus_t_pow_int(&ctx, p as i64, m).sub(&IwasawaSeries::one(&ctx, m))?;
    let rhs = if g.polynomial { g.series.compose_polynomial(&frob)? } else { g.series.compose(&frob)? };
    Ok(lhs.agrees_with(&rhs))
}

/// `tilde(g h) - tilde(g) - tilde(h)` vanishes to precision.
pub fn tilde_is_multiplicative(g: &ColemanSeries, h: &ColemanSeries) -> Result<bool> {
    let gh = coleman_tilde(&g.mul(h)?)?;
    let sum = coleman_tilde(g)?.series.add(&coleman_tilde(h)?.series)?;
    Ok(gh.series.agrees_with(&sum))
}
