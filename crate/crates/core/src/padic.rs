//! Fixed-precision p-adic integers.
//!
//! A [`PadicInt`] is an element of `Z_p` known modulo `p^k`, where `k` (the
//! known precision) never exceeds the working precision `N` of its
//! [`PadicContext`]. Arithmetic tracks precision loss: sums keep the smaller
//! precision, products gain from the valuation of the other factor, and
//! division by `p^e` costs `e` digits.
//!
//! The logarithm and exponential are isometries on their domains
//! (`1 + 4Z_2` and `4Z_2` for `p = 2`, `1 + pZ_p` and `pZ_p` otherwise), so
//! both preserve the known precision of their argument.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

struct ContextInner {
    p: u64,
    digits: u32,
    powers: Vec<BigUint>,
}

/// Prime and working precision shared by every value of one computation.
#[derive(Clone)]
pub struct PadicContext(Arc<ContextInner>);

impl PadicContext {
    pub fn new(p: u64, digits: u32) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::DomainError(format!("{p} is not prime")));
        }
        if digits == 0 {
            return Err(Error::DomainError("precision must be at least one digit".into()));
        }
        let pb = BigUint::from(p);
        let mut powers = Vec::with_capacity(digits as usize + 1);
        let mut acc = BigUint::one();
        for _ in 0..=digits {
            powers.push(acc.clone());
            acc *= &pb;
        }
        Ok(PadicContext(Arc::new(ContextInner { p, digits, powers })))
    }

    /// `Z_2` with 64 digits.
    pub fn two_adic() -> Self {
        Self::new(2, 64).expect("2 is prime")
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn digits(&self) -> u32 {
        self.0.digits
    }

    /// `p^k` for `k <= N`.
    pub fn power(&self, k: u32) -> &BigUint {
        &self.0.powers[k as usize]
    }

    /// Same prime, different working precision.
    pub fn with_digits(&self, digits: u32) -> Self {
        Self::new(self.p(), digits).expect("prime already validated")
    }

    pub fn zero(&self) -> PadicInt {
        PadicInt::from_parts(self.clone(), BigUint::zero(), self.digits())
    }

    pub fn one(&self) -> PadicInt {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> PadicInt {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> PadicInt {
        let m = BigInt::from(self.power(self.digits()).clone());
        let r = v.mod_floor(&m).to_biguint().expect("non-negative after mod_floor");
        PadicInt::from_parts(self.clone(), r, self.digits())
    }

    /// `num / den` for a denominator prime to `p`.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<PadicInt> {
        Ok(&self.from_i64(num) * &self.from_i64(den).inv()?)
    }
}

impl PartialEq for PadicContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.p() == other.p() && self.digits() == other.digits())
    }
}

impl Eq for PadicContext {}

impl fmt::Debug for PadicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}/{}^{}", self.p(), self.p(), self.digits())
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// p-adic valuation of a value known to finite precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Exact(u32),
    /// The value is zero modulo `p^k`; only the lower bound is known.
    AtLeast(u32),
}

impl Valuation {
    /// The exact value or the known lower bound.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }

    pub fn exact(self) -> Option<u32> {
        match self {
            Valuation::Exact(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Exact(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

/// An element of `Z_p` known modulo `p^prec`.
///
/// The residue is kept reduced modulo `p^prec`, so structural equality is
/// equality of (context, residue, known precision).
#[derive(Clone, PartialEq, Eq)]
pub struct PadicInt {
    ctx: PadicContext,
    residue: BigUint,
    prec: u32,
}

/// `u = sign * principal` with `principal` in `1 + 4Z_2` (or `1 + pZ_p`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitDecomposition {
    /// `+-1` for `p = 2`, the Teichmuller representative otherwise.
    pub sign: PadicInt,
    pub principal: PadicInt,
}

impl PadicInt {
    pub fn from_parts(ctx: PadicContext, residue: BigUint, prec: u32) -> Self {
        let prec = prec.min(ctx.digits());
        let residue = residue % ctx.power(prec);
        PadicInt { ctx, residue, prec }
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }

    /// Number of known digits.
    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Canonical residue in `[0, p^prec)`.
    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    /// The lift in `(-p^k/2, p^k/2]`.
    pub fn to_bigint(&self) -> BigInt {
        let m = BigInt::from(self.ctx.power(self.prec).clone());
        let r = BigInt::from(self.residue.clone());
        if &r + &r > m {
            r - m
        } else {
            r
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_bigint().to_i64()
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.prec >= 1 && !(&self.residue % self.p()).is_zero()
    }

    pub fn valuation(&self) -> Valuation {
        if self.residue.is_zero() {
            return Valuation::AtLeast(self.prec);
        }
        Valuation::Exact(biguint_valuation(&self.residue, self.p()))
    }

    /// Exact valuation, or the precision when the value is zero to precision.
    pub fn val_bound(&self) -> u32 {
        self.valuation().lower_bound()
    }

    /// Reduce to `k` known digits (no-op when `k >= prec`).
    pub fn with_precision(&self, k: u32) -> Self {
        if k >= self.prec {
            return self.clone();
        }
        PadicInt::from_parts(self.ctx.clone(), self.residue.clone(), k)
    }

    /// Same value in a context with the same prime and a different `N`.
    /// Known digits are kept (truncated when the new `N` is smaller).
    pub fn lift_to(&self, ctx: &PadicContext) -> Result<Self> {
        if ctx.p() != self.p() {
            return Err(Error::ContextMismatch);
        }
        Ok(PadicInt::from_parts(ctx.clone(), self.residue.clone(), self.prec))
    }

    /// Agreement modulo the smaller of the two precisions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let k = self.prec.min(other.prec);
        let m = self.ctx.power(k);
        (&self.residue % m) == (&other.residue % m)
    }

    pub fn mul_i64(&self, c: i64) -> Self {
        self * &self.ctx.from_i64(c)
    }

    /// Multiplication by `p^e`; gains `e` digits up to the working precision.
    pub fn mul_p_pow(&self, e: u32) -> Self {
        let prec = (self.prec + e).min(self.ctx.digits());
        let r = &self.residue * self.ctx.power(e.min(self.ctx.digits()));
        PadicInt::from_parts(self.ctx.clone(), r, prec)
    }

    /// Exact division by `p^e`; costs `e` digits.
    pub fn div_p_pow(&self, e: u32) -> Result<Self> {
        if e == 0 {
            return Ok(self.clone());
        }
        if e > self.prec {
            return Err(Error::PrecisionExhausted(format!(
                "dividing by {}^{} with only {} known digits",
                self.p(),
                e,
                self.prec
            )));
        }
        match self.valuation() {
            Valuation::Exact(v) if v < e => Err(Error::NonIntegral(format!(
                "valuation {v} < {e} in division by {}^{e}",
                self.p()
            ))),
            _ => Ok(PadicInt::from_parts(
                self.ctx.clone(),
                &self.residue / self.ctx.power(e),
                self.prec - e,
            )),
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn inv(&self) -> Result<Self> {
        if self.prec == 0 {
            return Err(Error::PrecisionExhausted("inverting a value with no known digits".into()));
        }
        if !self.is_unit() {
            return Err(Error::NonUnit);
        }
        let m = self.ctx.power(self.prec);
        let r = inv_mod(&self.residue, m).ok_or(Error::NonUnit)?;
        Ok(PadicInt::from_parts(self.ctx.clone(), r, self.prec))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.ctx.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Splitting `Z_p^x = mu x (1 + pZ_p)` (with `1 + 4Z_2` for `p = 2`).
    pub fn unit_decompose(&self) -> Result<UnitDecomposition> {
        if !self.is_unit() {
            return Err(Error::NonUnit);
        }
        let ctx = &self.ctx;
        if self.p() == 2 {
            if self.prec < 2 {
                return Err(Error::PrecisionExhausted("sign of a unit needs two digits".into()));
            }
            let low = (&self.residue % 4u32).to_u32().unwrap_or(0);
            let sign = if low == 1 { ctx.one() } else { ctx.from_i64(-1) };
            let principal = self * &sign;
            return Ok(UnitDecomposition {
                sign: sign.with_precision(self.prec),
                principal,
            });
        }
        // Teichmuller lift: u^(p^k) converges to omega(u) one digit per step.
        let mut t = self.clone();
        for _ in 0..self.prec {
            t = t.pow(self.p());
        }
        let principal = self * &t.inv()?;
        Ok(UnitDecomposition { sign: t, principal })
    }

    fn principal_domain_ok(&self) -> Result<()> {
        let need = if self.p() == 2 { 2 } else { 1 };
        if self.prec < need {
            return Err(Error::DomainError("not enough digits to certify a principal unit".into()));
        }
        let one = self.ctx.one();
        let x = self - &one;
        if x.val_bound() < need {
            return Err(Error::DomainError(format!(
                "log needs u = 1 mod {}^{need}",
                self.p()
            )));
        }
        Ok(())
    }

    /// p-adic logarithm on `1 + 4Z_2` (`p = 2`) or `1 + pZ_p`.
    pub fn log(&self) -> Result<Self> {
        self.principal_domain_ok()?;
        let p = self.p();
        let k = self.prec;
        let x = (&self.residue + self.ctx.power(k) - 1u32) % self.ctx.power(k);
        if x.is_zero() {
            return Ok(PadicInt::from_parts(self.ctx.clone(), BigUint::zero(), k));
        }
        let v = biguint_valuation(&x, p);
        // terms x^i / i with i*v - v_p(i) >= k vanish mod p^k
        let mut imax = 1u64;
        while (imax as i64) * (v as i64) - (ilog(imax, p) as i64) < k as i64 {
            imax += 1;
        }
        let guard = ilog(imax, p);
        let work = big_pow(p, k + guard);
        let modk = self.ctx.power(k).clone();
        let mut acc = BigInt::zero();
        let mut xp = BigUint::one();
        for i in 1..=imax {
            xp = (&xp * &x) % &work;
            let e = u64_valuation(i, p);
            let unit = i / p.pow(e);
            let num = (&xp / big_pow(p, e)) % &modk;
            let inv = inv_mod(&(BigUint::from(unit) % &modk), &modk).expect("unit");
            let term = BigInt::from((num * inv) % &modk);
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let r = acc.mod_floor(&BigInt::from(modk)).to_biguint().unwrap();
        Ok(PadicInt::from_parts(self.ctx.clone(), r, k))
    }

    /// p-adic exponential on `4Z_2` (`p = 2`) or `pZ_p`.
    pub fn exp(&self) -> Result<Self> {
        let p = self.p();
        let need = if p == 2 { 2 } else { 1 };
        let k = self.prec;
        if self.val_bound() < need {
            return Err(Error::DomainError(format!("exp needs valuation >= {need}")));
        }
        if self.residue.is_zero() {
            return Ok(self.ctx.one().with_precision(k));
        }
        let x = self.residue.clone();
        let v = biguint_valuation(&x, p) as i64;
        // v_p(i!) <= (i - 1)/(p - 1)
        let mut imax = 1u64;
        while (imax as i64) * v - ((imax as i64 - 1) / (p as i64 - 1)) < k as i64 {
            imax += 1;
        }
        let guard = factorial_valuation(imax, p);
        let work = big_pow(p, k + guard);
        let modk = self.ctx.power(k).clone();
        let mut acc = BigUint::one();
        let mut xp = BigUint::one();
        let mut fact_unit = BigUint::one();
        let mut fact_val = 0u32;
        for i in 1..=imax {
            xp = (&xp * &x) % &work;
            let e = u64_valuation(i, p);
            fact_val += e;
            fact_unit = (fact_unit * BigUint::from(i / p.pow(e))) % &modk;
            let num = (&xp / big_pow(p, fact_val)) % &modk;
            let inv = inv_mod(&fact_unit, &modk).expect("unit");
            acc += (num * inv) % &modk;
        }
        Ok(PadicInt::from_parts(self.ctx.clone(), acc % &modk, k))
    }

    /// `u^s := exp(s log u)` for a principal unit `u` and `s` in `Z_p`.
    pub fn kappa_power(&self, s: &PadicInt) -> Result<Self> {
        let l = self.log()?;
        (s * &l).exp()
    }

    /// Base-p digits, most significant first, exactly `prec` of them.
    pub fn to_digit_string(&self) -> String {
        let p = self.p();
        let mut digits = Vec::with_capacity(self.prec as usize);
        let mut r = self.residue.clone();
        for _ in 0..self.prec {
            let (q, d) = r.div_rem(&BigUint::from(p));
            digits.push(d.to_u64().unwrap_or(0));
            r = q;
        }
        digits.reverse();
        if p <= 36 {
            digits
                .iter()
                .map(|&d| std::char::from_digit(d as u32, p as u32).unwrap_or('?'))
                .collect()
        } else {
            digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
        }
    }

    /// Parse the textual form `p^v * m mod p^k`, `m mod p^k`, or a plain
    /// (possibly negative) integer taken at full precision.
    pub fn parse_in(ctx: &PadicContext, s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot read p-adic value {s:?}"));
        let (value_part, prec) = match s.split_once("mod") {
            Some((a, b)) => {
                let k = parse_prime_power(b.trim(), ctx.p()).ok_or_else(bad)?;
                (a.trim(), k)
            }
            None => (s, ctx.digits()),
        };
        if prec > ctx.digits() {
            return Err(Error::Parse(format!(
                "{s:?} carries {prec} digits, context has {}",
                ctx.digits()
            )));
        }
        let value = match value_part.split_once('*') {
            Some((pp, m)) => {
                let v = parse_prime_power(pp.trim(), ctx.p()).ok_or_else(bad)?;
                let m = BigInt::from_str(m.trim()).map_err(|_| bad())?;
                m * BigInt::from(big_pow(ctx.p(), v))
            }
            None => BigInt::from_str(value_part).map_err(|_| bad())?,
        };
        Ok(ctx.from_bigint(&value).with_precision(prec))
    }
}

fn parse_prime_power(s: &str, p: u64) -> Option<u32> {
    let (base, exp) = s.split_once('^')?;
    if base.trim().parse::<u64>().ok()? != p {
        return None;
    }
    exp.trim().parse().ok()
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p();
        match self.valuation() {
            Valuation::AtLeast(_) => write!(f, "0 mod {p}^{}", self.prec),
            Valuation::Exact(v) => {
                let m = &self.residue / self.ctx.power(v);
                write!(f, "{p}^{v} * {m} mod {p}^{}", self.prec)
            }
        }
    }
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn check_ctx(a: &PadicInt, b: &PadicInt) {
    assert!(a.ctx == b.ctx, "mixing p-adic contexts {:?} and {:?}", a.ctx, b.ctx);
}

impl Add for &PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: &PadicInt) -> PadicInt {
        check_ctx(self, rhs);
        let k = self.prec.min(rhs.prec);
        PadicInt::from_parts(self.ctx.clone(), &self.residue + &rhs.residue, k)
    }
}

impl Sub for &PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: &PadicInt) -> PadicInt {
        check_ctx(self, rhs);
        let k = self.prec.min(rhs.prec);
        let m = self.ctx.power(k);
        let r = (&self.residue % m) + m - (&rhs.residue % m);
        PadicInt::from_parts(self.ctx.clone(), r, k)
    }
}

impl Mul for &PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: &PadicInt) -> PadicInt {
        check_ctx(self, rhs);
        let k = (self.prec + rhs.val_bound()).min(rhs.prec + self.val_bound());
        PadicInt::from_parts(self.ctx.clone(), &self.residue * &rhs.residue, k)
    }
}

impl Neg for &PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        let m = self.ctx.power(self.prec);
        PadicInt::from_parts(self.ctx.clone(), m - &self.residue, self.prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PadicInt {
            type Output = PadicInt;
            fn $m(self, rhs: PadicInt) -> PadicInt {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&PadicInt> for PadicInt {
            type Output = PadicInt;
            fn $m(self, rhs: &PadicInt) -> PadicInt {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        -&self
    }
}

pub(crate) fn big_pow(p: u64, e: u32) -> BigUint {
    num_traits::pow(BigUint::from(p), e as usize)
}

pub(crate) fn biguint_valuation(x: &BigUint, p: u64) -> u32 {
    if x.is_zero() {
        return u32::MAX;
    }
    if p == 2 {
        return x.trailing_zeros().unwrap_or(0) as u32;
    }
    let pb = BigUint::from(p);
    let mut v = 0;
    let mut m = x.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        m = q;
    }
}

pub(crate) fn u64_valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// `floor(log_p n)` for `n >= 1`.
pub(crate) fn ilog(n: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut m = n;
    while m >= p {
        m /= p;
        v += 1;
    }
    v
}

/// `v_p(n!)` by Legendre's formula.
pub(crate) fn factorial_valuation(n: u64, p: u64) -> u32 {
    let mut v = 0u64;
    let mut q = n / p;
    while q > 0 {
        v += q;
        q /= p;
    }
    v as u32
}

pub(crate) fn inv_mod(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if m.is_one() {
        return Some(BigUint::zero());
    }
    let a = BigInt::from(a % m);
    let mb = BigInt::from(m.clone());
    let e = a.extended_gcd(&mb);
    if !e.gcd.is_one() {
        return None;
    }
    let x = e.x.mod_floor(&mb);
    debug_assert!(!x.is_negative());
    x.to_biguint()
}

#[allow(dead_code)]
pub(crate) fn sign_of(x: &BigInt) -> Sign {
    x.sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PadicContext {
        PadicContext::two_adic()
    }

    #[test]
    fn inverse_of_three() {
        let c = ctx();
        let three = c.from_i64(3);
        assert_eq!(&three.inv().unwrap() * &three, c.one());
        assert_eq!(c.from_i64(2).inv(), Err(Error::NonUnit));
    }

    #[test]
    fn exact_subtraction_keeps_precision() {
        let c = ctx();
        let a = c.from_bigint(&(BigInt::one() + BigInt::from(big_pow(2, 63))));
        let s = &a + &c.from_i64(-1);
        assert_eq!(s.valuation(), Valuation::Exact(63));
        assert_eq!(s.precision(), 64);
    }

    #[test]
    fn valuations() {
        let c = ctx();
        assert_eq!(c.from_i64(12).valuation(), Valuation::Exact(2));
        assert_eq!(c.from_i64(5).valuation(), Valuation::Exact(0));
        assert_eq!(c.zero().with_precision(10).valuation(), Valuation::AtLeast(10));
    }

    #[test]
    fn unit_decomposition_examples() {
        let c = ctx();
        let d = c.from_i64(5).unit_decompose().unwrap();
        assert_eq!((d.sign, d.principal), (c.one(), c.from_i64(5)));
        let d = c.from_i64(3).unit_decompose().unwrap();
        assert_eq!((d.sign, d.principal), (c.from_i64(-1), c.from_i64(-3)));
        let d = c.from_i64(-1).unit_decompose().unwrap();
        assert_eq!((d.sign, d.principal), (c.from_i64(-1), c.one()));
        assert_eq!(c.from_i64(6).unit_decompose(), Err(Error::NonUnit));
    }

    #[test]
    fn teichmuller_for_odd_prime() {
        let c = PadicContext::new(5, 20).unwrap();
        let d = c.from_i64(2).unit_decompose().unwrap();
        assert_eq!(d.sign.pow(4), c.one());
        assert_eq!(&d.sign * &d.principal, c.from_i64(2));
        assert!((&d.principal - &c.one()).val_bound() >= 1);
    }

    #[test]
    fn log_and_exp_basics() {
        let c = ctx();
        assert!(c.one().log().unwrap().is_zero());
        let l5 = c.from_i64(5).log().unwrap();
        let l25 = c.from_i64(25).log().unwrap();
        assert_eq!(l25, &l5 + &l5);
        assert_eq!(l5.valuation(), Valuation::Exact(2));
        assert!(c.from_i64(3).log().is_err());
        assert!(c.from_i64(2).exp().is_err());
    }

    #[test]
    fn kappa_power_integer_exponents() {
        let c = ctx();
        let five = c.from_i64(5);
        assert_eq!(five.kappa_power(&c.zero()).unwrap(), c.one());
        assert_eq!(five.kappa_power(&c.from_i64(2)).unwrap(), c.from_i64(25));
        let inv = five.kappa_power(&c.from_i64(-1)).unwrap();
        assert_eq!(&inv * &five, c.one());
    }

    #[test]
    fn textual_round_trip() {
        let c = ctx();
        let x = c.from_i64(12);
        assert_eq!(x.to_string(), "2^2 * 3 mod 2^64");
        assert_eq!(PadicInt::parse_in(&c, &x.to_string()).unwrap(), x);
        assert_eq!(PadicInt::parse_in(&c, "-1").unwrap(), c.from_i64(-1));
        let z = c.zero().with_precision(7);
        assert_eq!(z.to_string(), "0 mod 2^7");
        assert_eq!(PadicInt::parse_in(&c, "0 mod 2^7").unwrap(), z);
        assert_eq!(c.from_i64(5).with_precision(4).to_digit_string(), "0101");
        assert!(PadicInt::parse_in(&c, "3^1 * 2 mod 2^4").is_err());
    }
}
