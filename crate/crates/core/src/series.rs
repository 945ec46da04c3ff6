//! Truncated power series `R[[T]] / T^M` over a p-adic coefficient ring.
//!
//! With `R = Z_p` this is the Iwasawa algebra `Lambda = Z_p[[T]]`, `T = gamma - 1`.
//! The same type carries series over `Z_p[zeta_d]` (see [`crate::cyclotomic`])
//! through the [`Coeff`] trait. Every coefficient carries its own known
//! precision, so the `(digit, degree)` window of a result is visible on the
//! value itself.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::padic::{big_pow, ilog, inv_mod, u64_valuation, PadicContext, PadicInt, Valuation};

/// Scalars a series can have as coefficients.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display {
    /// Descriptor shared by all scalars of one ring.
    type Ring: Clone + PartialEq + fmt::Debug;

    fn ring(&self) -> Self::Ring;
    fn base_context(ring: &Self::Ring) -> &PadicContext;
    fn zero(ring: &Self::Ring) -> Self;
    fn one(ring: &Self::Ring) -> Self;
    fn from_base(ring: &Self::Ring, x: &PadicInt) -> Self;

    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn scale(&self, x: &PadicInt) -> Self;
    fn div_p_pow(&self, e: u32) -> Result<Self>;
    fn inverse(&self) -> Result<Self>;

    /// Valuation in the uniformizer of the ring, with the ramification
    /// index `e` (so `v_p = v / e`).
    fn ramified_valuation(&self) -> (Valuation, u32);
    /// Number of known p-adic digits (minimum over coordinates).
    fn precision(&self) -> u32;
    fn cap_precision(&self, k: u32) -> Self;
    fn agrees_with(&self, other: &Self) -> bool;

    fn is_unit(&self) -> bool {
        matches!(self.ramified_valuation().0, Valuation::Exact(0))
    }

    /// Zero to the known precision.
    fn is_zero(&self) -> bool {
        matches!(self.ramified_valuation().0, Valuation::AtLeast(_))
    }
}

impl Coeff for PadicInt {
    type Ring = PadicContext;

    fn ring(&self) -> PadicContext {
        self.context().clone()
    }
    fn base_context(ring: &PadicContext) -> &PadicContext {
        ring
    }
    fn zero(ring: &PadicContext) -> Self {
        ring.zero()
    }
    fn one(ring: &PadicContext) -> Self {
        ring.one()
    }
    fn from_base(_ring: &PadicContext, x: &PadicInt) -> Self {
        x.clone()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, x: &PadicInt) -> Self {
        self * x
    }
    fn div_p_pow(&self, e: u32) -> Result<Self> {
        PadicInt::div_p_pow(self, e)
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn ramified_valuation(&self) -> (Valuation, u32) {
        (self.valuation(), 1)
    }
    fn precision(&self) -> u32 {
        PadicInt::precision(self)
    }
    fn cap_precision(&self, k: u32) -> Self {
        self.with_precision(k)
    }
    fn agrees_with(&self, other: &Self) -> bool {
        PadicInt::agrees_with(self, other)
    }
}

/// An element of `R[[T]]` known modulo `T^M`, `M = coeffs.len() >= 1`.
#[derive(Clone, PartialEq)]
pub struct Series<R: Coeff> {
    ring: R::Ring,
    coeffs: Vec<R>,
}

/// Power series over `Z_p`.
pub type IwasawaSeries = Series<PadicInt>;

/// `mu` and `lambda` of a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuLambda {
    /// Minimal coefficient valuation, in units of the uniformizer.
    pub mu: u32,
    pub lambda: usize,
    /// Ramification index of the coefficient ring (1 over `Z_p`).
    pub ramification: u32,
    /// The minimum first occurs at the last index of the window, so a
    /// longer window could only confirm it; `lambda >= M - 1` is all that
    /// is certain about the untruncated series.
    pub at_window_edge: bool,
}

impl<R: Coeff> Series<R> {
    pub fn new(ring: R::Ring, coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs T-precision at least 1");
        Series { ring, coeffs }
    }

    /// Polynomial `c_0 + c_1 T + ...` padded with exact zeros to length `m`.
    pub fn from_poly(ring: R::Ring, mut coeffs: Vec<R>, m: usize) -> Self {
        coeffs.truncate(m);
        while coeffs.len() < m {
            coeffs.push(R::zero(&ring));
        }
        Series::new(ring, coeffs)
    }

    pub fn zero(ring: &R::Ring, m: usize) -> Self {
        Series::from_poly(ring.clone(), vec![], m)
    }

    pub fn one(ring: &R::Ring, m: usize) -> Self {
        Series::constant(R::one(ring), m)
    }

    pub fn constant(c: R, m: usize) -> Self {
        let ring = c.ring();
        Series::from_poly(ring, vec![c], m)
    }

    /// The variable `T`.
    pub fn t(ring: &R::Ring, m: usize) -> Self {
        Series::from_poly(ring.clone(), vec![R::zero(ring), R::one(ring)], m)
    }

    pub fn ring(&self) -> &R::Ring {
        &self.ring
    }

    pub fn context(&self) -> &PadicContext {
        R::base_context(&self.ring)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [R] {
        &mut self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(|| R::zero(&self.ring))
    }

    /// T-precision `M`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest known digit count over all coefficients.
    pub fn min_precision(&self) -> u32 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, m: usize) -> Self {
        let m = m.min(self.len()).max(1);
        Series::new(self.ring.clone(), self.coeffs[..m].to_vec())
    }

    pub fn cap_precision(&self, k: u32) -> Self {
        self.map(|c| c.cap_precision(k))
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        Series::new(self.ring.clone(), self.coeffs.iter().map(f).collect())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.len().min(other.len());
        let c = (0..m).map(|i| self.coeffs[i].plus(&other.coeffs[i])).collect();
        Ok(Series::new(self.ring.clone(), c))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.len().min(other.len());
        let c = (0..m).map(|i| self.coeffs[i].minus(&other.coeffs[i])).collect();
        Ok(Series::new(self.ring.clone(), c))
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.negate())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.len().min(other.len());
        let mut out = vec![R::zero(&self.ring); m];
        for (i, a) in self.coeffs.iter().take(m).enumerate() {
            if a.is_zero() && a.precision() >= self.ring_digits() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(m - i).enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Ok(Series::new(self.ring.clone(), out))
    }

    /// Multiplication by `a + b T`.
    fn mul_linear(&self, a: &R, b: &R) -> Self {
        let m = self.len();
        let mut out: Vec<R> = self.coeffs.iter().map(|c| c.times(a)).collect();
        for i in 1..m {
            out[i] = out[i].plus(&self.coeffs[i - 1].times(b));
        }
        Series::new(self.ring.clone(), out)
    }

    fn ring_digits(&self) -> u32 {
        self.context().digits()
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|a| a.times(c))
    }

    pub fn scale_base(&self, x: &PadicInt) -> Self {
        self.map(|a| a.scale(x))
    }

    /// Division by `p^e`. A coefficient known to fewer than `e` digits, all
    /// zero, becomes unknown rather than failing.
    pub fn div_p_pow(&self, e: u32) -> Result<Self> {
        let c = self
            .coeffs
            .iter()
            .map(|a| match a.div_p_pow(e) {
                Err(Error::PrecisionExhausted(_)) if a.is_zero() => Ok(a.cap_precision(0)),
                other => other,
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Series::new(self.ring.clone(), c))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Series::one(&self.ring, self.len());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            base = base.mul(&base).expect("same ring");
            e >>= 1;
        }
        acc
    }

    /// Multiplication by `T^k`; the window length is kept.
    pub fn mul_t_pow(&self, k: usize) -> Self {
        let m = self.len();
        let mut c = vec![R::zero(&self.ring); k.min(m)];
        c.extend(self.coeffs.iter().take(m.saturating_sub(k)).cloned());
        Series::new(self.ring.clone(), c)
    }

    /// Exact division by `T^k`; the first `k` coefficients must vanish to
    /// precision. The window shrinks to `M - k`.
    pub fn div_t_pow(&self, k: usize) -> Result<Self> {
        if k >= self.len() {
            return Err(Error::PrecisionExhausted(format!(
                "dividing by T^{k} leaves nothing of a window of length {}",
                self.len()
            )));
        }
        if let Some(i) = (0..k).find(|&i| !self.coeffs[i].is_zero()) {
            return Err(Error::NonIntegral(format!("coefficient {i} is nonzero in division by T^{k}")));
        }
        Ok(Series::new(self.ring.clone(), self.coeffs[k..].to_vec()))
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inverse(&self) -> Result<Self> {
        let b0 = self.coeffs[0].inverse()?;
        let m = self.len();
        let mut b: Vec<R> = Vec::with_capacity(m);
        b.push(b0.clone());
        for n in 1..m {
            let mut s = R::zero(&self.ring);
            for i in 1..=n {
                s = s.plus(&self.coeffs[i].times(&b[n - i]));
            }
            b.push(s.times(&b0).negate());
        }
        Ok(Series::new(self.ring.clone(), b))
    }

    /// Exact quotient `self / d`, where `d` has a unit constant term, or
    /// `d = T^k u` with `u(0)` a unit (then `self` must be divisible by `T^k`).
    pub fn divide(&self, d: &Self) -> Result<Self> {
        self.check(d)?;
        let k = d.coeffs.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroDivisor)?;
        if !d.coeffs[k].is_unit() {
            return Err(Error::NonUnit);
        }
        let num = self.div_t_pow(k)?;
        let den = d.div_t_pow(k)?;
        let m = num.len().min(den.len());
        num.truncate(m).mul(&den.truncate(m).inverse()?)
    }

    /// Bound for the precision of coefficient `j` when the sum over
    /// `G(0)^i` is cut at `i = M`: `floor(v_pi(G(0)) * (M - j) / e)`.
    fn tail_caps(g0: &R, m: usize) -> Result<Vec<u32>> {
        let (v, e) = g0.ramified_valuation();
        let v = v.lower_bound() as u64;
        if v == 0 {
            return Err(Error::DomainError(
                "substitution needs a topologically nilpotent argument".into(),
            ));
        }
        Ok((0..m)
            .map(|j| ((v * (m - j) as u64) / e as u64).min(u32::MAX as u64) as u32)
            .collect())
    }

    /// `F(G(T))`. `G(0)` must have positive valuation (or vanish); when it
    /// is nonzero the contribution of the unseen coefficients `c_i`,
    /// `i >= M`, is accounted for by lowering coefficient precisions.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.compose_with(g, false)
    }

    /// `F(G(T))` for a polynomial `F` (coefficients beyond the window are
    /// exactly zero), so no tail correction is needed.
    pub fn compose_polynomial(&self, g: &Self) -> Result<Self> {
        self.compose_with(g, true)
    }

    fn compose_with(&self, g: &Self, f_is_poly: bool) -> Result<Self> {
        self.check(g)?;
        let m = self.len().min(g.len());
        let g = g.truncate(m);
        let caps = if f_is_poly {
            vec![u32::MAX; m]
        } else {
            Self::tail_caps(&g.coeffs[0], m)?
        };
        let linear = m >= 2 && g.coeffs[2..].iter().all(|c| c.is_zero() && c.precision() >= self.ring_digits());
        let mut acc = Series::constant(self.coeffs[m - 1].clone(), m);
        for i in (0..m - 1).rev() {
            acc = if linear { acc.mul_linear(&g.coeffs[0], &g.coeffs[1]) } else { acc.mul(&g)? };
            acc.coeffs[0] = acc.coeffs[0].plus(&self.coeffs[i]);
        }
        let c = acc
            .coeffs
            .iter()
            .zip(&caps)
            .map(|(c, &k)| c.cap_precision(k))
            .collect();
        Ok(Series::new(self.ring.clone(), c))
    }

    /// The same series with coefficients pushed into a larger ring.
    pub fn extend_scalars(ring: &R::Ring, f: &IwasawaSeries) -> Self {
        Series::new(ring.clone(), f.coeffs().iter().map(|c| R::from_base(ring, c)).collect())
    }

    /// `F(z)` for `z` of positive valuation, with the truncation error
    /// `v(z^M)` folded into the precision of the result.
    pub fn eval(&self, z: &R) -> Result<R> {
        let m = self.len();
        let cap = Self::tail_caps(z, m + 1)?[1];
        let mut acc = self.coeffs[m - 1].clone();
        for i in (0..m - 1).rev() {
            acc = acc.times(z).plus(&self.coeffs[i]);
        }
        Ok(acc.cap_precision(cap))
    }

    /// `mu` and `lambda`, answered only when visible at this precision.
    pub fn mu_lambda(&self) -> Result<MuLambda> {
        let vals: Vec<(Valuation, u32)> = self.coeffs.iter().map(|c| c.ramified_valuation()).collect();
        let e = vals.first().map(|v| v.1).unwrap_or(1);
        let best = vals
            .iter()
            .enumerate()
            .filter_map(|(i, (v, _))| v.exact().map(|x| (x, i)))
            .min();
        let (mu, lambda) = best.ok_or_else(|| {
            Error::Indeterminate("every coefficient vanishes to its known precision".into())
        })?;
        for (j, (v, _)) in vals.iter().enumerate() {
            let hidden = match v {
                Valuation::Exact(_) => false,
                Valuation::AtLeast(k) => (j < lambda && *k <= mu) || (j > lambda && *k < mu),
            };
            if hidden {
                return Err(Error::Indeterminate(format!(
                    "coefficient {j} is only known to valuation {v}, not enough to rule out a smaller minimum"
                )));
            }
        }
        Ok(MuLambda {
            mu,
            lambda,
            ramification: e,
            at_window_edge: lambda + 1 == self.len(),
        })
    }

    /// Coefficientwise agreement to the smaller known precision over the
    /// common window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.agrees_with(b))
    }
}

impl IwasawaSeries {
    pub fn from_i64s(ctx: &PadicContext, coeffs: &[i64], m: usize) -> Self {
        Series::from_poly(ctx.clone(), coeffs.iter().map(|&c| ctx.from_i64(c)).collect(), m)
    }

    /// `(1 + T)^a` for an integer exponent, exactly.
    pub fn one_plus_t_pow_int(ctx: &PadicContext, a: i64, m: usize) -> Self {
        let mut c = Vec::with_capacity(m);
        let mut b = BigInt::one();
        let a = BigInt::from(a);
        for i in 0..m {
            c.push(ctx.from_bigint(&b));
            let i = BigInt::from(i);
            b = b * (&a - &i) / (i + 1);
        }
        Series::new(ctx.clone(), c)
    }

    /// `(1 + T)^a` for `a` in `Z_p`: binomial coefficients `C(a, i)`, each
    /// known to `k - floor(log_p i)` digits when `a` is known to `k`.
    pub fn one_plus_t_pow(a: &PadicInt, m: usize) -> Self {
        let ctx = a.context().clone();
        let p = ctx.p();
        let k = a.precision();
        let lift = a.residue().clone();
        let mut c = vec![ctx.one()];
        for i in 1..m as u64 {
            c.push(binomial_mod(&ctx, &lift, i, k).with_precision(k.saturating_sub(ilog(i, p))));
        }
        Series::new(ctx, c)
    }

    /// `T^k`.
    pub fn t_pow(ctx: &PadicContext, k: usize, m: usize) -> Self {
        let mut c = vec![ctx.zero(); m];
        if k < m {
            c[k] = ctx.one();
        }
        Series::new(ctx.clone(), c)
    }
}

/// `C(A, i) mod p^k` for an integer `A >= 0`.
pub(crate) fn binomial_mod(ctx: &PadicContext, a: &BigUint, i: u64, k: u32) -> PadicInt {
    let p = ctx.p();
    let fv = crate::padic::factorial_valuation(i, p);
    let work = big_pow(p, k + fv);
    let modk = big_pow(p, k);
    let a_mod = a % &work;
    let mut num = BigUint::one();
    let mut unit = BigUint::one();
    for j in 0..i {
        let term = (&a_mod + &work - (BigUint::from(j) % &work)) % &work;
        num = (num * term) % &work;
        let jj = j + 1;
        let e = u64_valuation(jj, p);
        unit = (unit * BigUint::from(jj / p.pow(e))) % &modk;
    }
    let num = (num / big_pow(p, fv)) % &modk;
    let inv = inv_mod(&unit, &modk).unwrap_or_else(BigUint::zero);
    PadicInt::from_parts(ctx.clone(), (num * inv) % &modk, k)
}

impl<R: Coeff> fmt::Display for Series<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*T")?,
                _ => write!(f, "({c})*T^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(T^{})", self.len())
    }
}

impl<R: Coeff> fmt::Debug for Series<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Small signed integers of a series, when every coefficient is one.
pub fn to_i64s(s: &IwasawaSeries) -> Option<Vec<i64>> {
    s.coeffs()
        .iter()
        .map(|c| {
            let b = c.to_bigint();
            if b.abs() < BigInt::from(1i64 << 62) {
                c.to_i64()
            } else {
                None
            }
        })
        .collect()
}
