//! The rings `Z_p[zeta_d] = Z_p[x] / Phi_d(x)`, evaluation of Iwasawa
//! series at `zeta_{p^n} - 1`, norms down to `Z_p`, and the identity
//! `mu * phi(p^n) + lambda = ord_p N(F(zeta_{p^n} - 1))`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicInt, Valuation};
use crate::series::{Coeff, IwasawaSeries};

struct RingInner {
    ctx: PadicContext,
    d: u64,
    /// `d = p^n * m` with `p` not dividing `m`.
    n: u32,
    m: u64,
    phi_int: Vec<BigInt>,
    phi: Vec<PadicInt>,
    /// Inverse of the matrix of the integral basis `x^(m' i) pi^j` (mixed case).
    pi_basis_inv: OnceLock<Option<Vec<Vec<PadicInt>>>>,
}

/// `Z_p[x] / Phi_d(x)` at the precision of a [`PadicContext`].
#[derive(Clone)]
pub struct CyclotomicRing(Arc<RingInner>);

impl PartialEq for CyclotomicRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.ctx == other.0.ctx && self.0.d == other.0.d)
    }
}

impl fmt::Debug for CyclotomicRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}[zeta_{}]", self.0.ctx.p(), self.0.d)
    }
}

/// Integer coefficients of `Phi_d`, constant term first.
pub fn cyclotomic_polynomial(d: u64) -> Vec<BigInt> {
    assert!(d >= 1);
    // x^d - 1 divided by Phi_k for every proper divisor k
    let mut num = vec![BigInt::zero(); d as usize + 1];
    num[0] = -BigInt::one();
    num[d as usize] = BigInt::one();
    for k in 1..d {
        if d.is_multiple_of(k) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(k));
        }
    }
    num
}

fn exact_div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone();
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] -= &c * bj;
            }
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

pub(crate) fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            n /= q;
            if n.is_multiple_of(q) {
                return 0;
            }
            result = -result;
        }
        q += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

pub(crate) fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            while n.is_multiple_of(q) {
                n /= q;
            }
            result -= result / q;
        }
        q += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

impl CyclotomicRing {
    pub fn new(ctx: &PadicContext, d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::DomainError("root of unity of order 0".into()));
        }
        let p = ctx.p();
        let mut m = d;
        let mut n = 0;
        while m.is_multiple_of(p) {
            m /= p;
            n += 1;
        }
        let phi_int = cyclotomic_polynomial(d);
        let phi = phi_int.iter().map(|c| ctx.from_bigint(c)).collect();
        Ok(CyclotomicRing(Arc::new(RingInner {
            ctx: ctx.clone(),
            d,
            n,
            m,
            phi_int,
            phi,
            pi_basis_inv: OnceLock::new(),
        })))
    }

    /// `Z_p[zeta_{p^n}]`.
    pub fn level(ctx: &PadicContext, n: u32) -> Result<Self> {
        Self::new(ctx, ctx.p().pow(n))
    }

    pub fn context(&self) -> &PadicContext {
        &self.0.ctx
    }

    pub fn order(&self) -> u64 {
        self.0.d
    }

    pub fn degree(&self) -> usize {
        self.0.phi.len() - 1
    }

    /// Ramification index `phi(p^n)` of the p-power part.
    pub fn ramification(&self) -> u32 {
        if self.0.n == 0 {
            1
        } else {
            euler_phi(self.0.ctx.p().pow(self.0.n)) as u32
        }
    }

    pub fn phi_int(&self) -> &[BigInt] {
        &self.0.phi_int
    }

    pub fn zero(&self) -> CyclotomicElt {
        CyclotomicElt::new(self.clone(), vec![])
    }

    pub fn one(&self) -> CyclotomicElt {
        self.from_base(&self.0.ctx.one())
    }

    pub fn from_base(&self, x: &PadicInt) -> CyclotomicElt {
        CyclotomicElt::new(self.clone(), vec![x.clone()])
    }

    pub fn from_i64(&self, c: i64) -> CyclotomicElt {
        self.from_base(&self.0.ctx.from_i64(c))
    }

    /// The class of `x`, a primitive `d`-th root of unity.
    pub fn zeta(&self) -> CyclotomicElt {
        self.zeta_pow(1)
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> CyclotomicElt {
        let k = k.rem_euclid(self.0.d as i64) as usize;
        let ctx = &self.0.ctx;
        let mut c = vec![ctx.zero(); k + 1];
        c[k] = ctx.one();
        CyclotomicElt::new(self.clone(), c)
    }

    /// An element from an integer polynomial in `x`.
    pub fn from_i64_poly(&self, coeffs: &[i64]) -> CyclotomicElt {
        let ctx = &self.0.ctx;
        CyclotomicElt::new(self.clone(), coeffs.iter().map(|&c| ctx.from_i64(c)).collect())
    }

    /// Reduce a polynomial of any degree modulo `Phi_d`.
    fn reduce(&self, mut c: Vec<PadicInt>) -> Vec<PadicInt> {
        let deg = self.degree();
        let ctx = &self.0.ctx;
        for i in (deg..c.len()).rev() {
            let top = c[i].clone();
            if top.is_zero() && top.precision() == ctx.digits() {
                continue;
            }
            for j in 0..deg {
                let t = &top * &self.0.phi[j];
                c[i - deg + j] = &c[i - deg + j] - &t;
            }
        }
        c.truncate(deg);
        while c.len() < deg {
            c.push(ctx.zero());
        }
        c
    }

    fn pi_basis_inverse(&self) -> Option<&Vec<Vec<PadicInt>>> {
        self.0
            .pi_basis_inv
            .get_or_init(|| {
                let e = self.ramification() as usize;
                let f = self.degree() / e;
                let ctx = &self.0.ctx;
                // pi = x^m - 1 generates the ramified part, x^(p^n) the unramified
                let pi = self.zeta_pow(self.0.m as i64).minus(&self.one());
                let w = self.zeta_pow(self.0.ctx.p().pow(self.0.n) as i64);
                let mut cols = Vec::with_capacity(self.degree());
                let mut wi = self.one();
                for _ in 0..f {
                    let mut pj = wi.clone();
                    for _ in 0..e {
                        cols.push(pj.coeffs.clone());
                        pj = pj.times(&pi);
                    }
                    wi = wi.times(&w);
                }
                let deg = self.degree();
                let mat: Vec<Vec<PadicInt>> =
                    (0..deg).map(|r| (0..deg).map(|c| cols[c][r].clone()).collect()).collect();
                invert_matrix(ctx, &mat)
            })
            .as_ref()
    }
}

/// An element of `Z_p[x] / Phi_d(x)` in the power basis `1, x, ..., x^(deg-1)`.
#[derive(Clone, PartialEq)]
pub struct CyclotomicElt {
    ring: CyclotomicRing,
    coeffs: Vec<PadicInt>,
}

impl CyclotomicElt {
    pub fn new(ring: CyclotomicRing, coeffs: Vec<PadicInt>) -> Self {
        let coeffs = ring.reduce(coeffs);
        CyclotomicElt { ring, coeffs }
    }

    pub fn ring_ref(&self) -> &CyclotomicRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[PadicInt] {
        &self.coeffs
    }

    /// The element as a base scalar, if it lies in `Z_p`.
    pub fn as_base(&self) -> Option<PadicInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn mul_x_minus_one(&self) -> Self {
        let ctx = self.ring.context();
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(-&self.coeffs[0]);
        for i in 1..self.coeffs.len() {
            c.push(&self.coeffs[i - 1] - &self.coeffs[i]);
        }
        c.push(self.coeffs.last().cloned().unwrap_or_else(|| ctx.zero()));
        CyclotomicElt::new(self.ring.clone(), c)
    }

    /// Coordinates in the integral basis `w^i pi^j` (`w = x^(p^n)`,
    /// `pi = x^m - 1`), ordered with `j` fastest.
    pub fn pi_coordinates(&self) -> Result<Vec<PadicInt>> {
        let r = &self.ring;
        if r.0.m == 1 {
            // Taylor shift: a(y + 1) in powers of y = x - 1
            let mut c = self.coeffs.clone();
            let deg = c.len();
            for i in 0..deg {
                for j in (i..deg - 1).rev() {
                    c[j] = &c[j] + &c[j + 1];
                }
            }
            return Ok(c);
        }
        if r.0.n == 0 {
            return Ok(self.coeffs.clone());
        }
        let inv = r
            .pi_basis_inverse()
            .ok_or_else(|| Error::PrecisionExhausted("integral basis change is singular at this precision".into()))?;
        Ok(inv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.coeffs)
                    .fold(r.context().zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    /// Multiplication-by-`self` matrix in the power basis.
    fn multiplication_matrix(&self) -> Vec<Vec<PadicInt>> {
        let deg = self.ring.degree();
        let mut cols = Vec::with_capacity(deg);
        let mut cur = self.clone();
        let x = self.ring.zeta();
        for _ in 0..deg {
            cols.push(cur.coeffs.clone());
            cur = cur.times(&x);
        }
        (0..deg).map(|r| (0..deg).map(|c| cols[c][r].clone()).collect()).collect()
    }

    /// Trace to `Z_p`: `Tr(x^i)` is the Ramanujan sum `c_d(i)`.
    pub fn trace(&self) -> PadicInt {
        let r = &self.ring;
        let ctx = r.context();
        let d = r.order();
        self.coeffs.iter().enumerate().fold(ctx.zero(), |acc, (i, c)| {
            let g = (i as u64).gcd(&d);
            let q = d / g;
            let t = mobius(q) * (euler_phi(d) / euler_phi(q)) as i64;
            &acc + &c.mul_i64(t)
        })
    }

    /// Galois conjugate `x -> x^j` for `j` prime to `d`.
    pub fn conjugate(&self, j: i64) -> Self {
        let r = &self.ring;
        let mut acc = r.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() && c.precision() == r.context().digits() {
                continue;
            }
            acc = acc.plus(&r.zeta_pow(j * i as i64).scale(c));
        }
        acc
    }

    /// Newton lift of an inverse found modulo `p`.
    fn newton_inverse(&self) -> Result<Self> {
        let r = &self.ring;
        let ctx = r.context();
        let p = ctx.p();
        let k = Coeff::precision(self);
        if k == 0 {
            return Err(Error::PrecisionExhausted("inverting an unknown element".into()));
        }
        let a_bar: Vec<u64> = self.coeffs.iter().map(|c| (c.residue() % p).to_u64().unwrap_or(0)).collect();
        let phi_bar: Vec<u64> = r.0.phi_int.iter().map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap_or(0)).collect();
        let s = fp_inverse_mod(&a_bar, &phi_bar, p).ok_or(Error::NonUnit)?;
        let exact = |c: &PadicInt| PadicInt::from_parts(ctx.clone(), c.residue().clone(), ctx.digits());
        let a_full = CyclotomicElt::new(r.clone(), self.coeffs.iter().map(exact).collect());
        let mut b = CyclotomicElt::new(r.clone(), s.iter().map(|&c| ctx.from_i64(c as i64)).collect());
        let two = r.from_i64(2);
        let mut good = 1u32;
        while good < k {
            b = b.times(&two.minus(&a_full.times(&b)));
            good *= 2;
        }
        let b = b.cap_precision(k);
        debug_assert!(b.times(self).agrees_with(&r.one()));
        Ok(b)
    }
}

impl Coeff for CyclotomicElt {
    type Ring = CyclotomicRing;

    fn ring(&self) -> CyclotomicRing {
        self.ring.clone()
    }
    fn base_context(ring: &CyclotomicRing) -> &PadicContext {
        ring.context()
    }
    fn zero(ring: &CyclotomicRing) -> Self {
        ring.zero()
    }
    fn one(ring: &CyclotomicRing) -> Self {
        ring.one()
    }
    fn from_base(ring: &CyclotomicRing, x: &PadicInt) -> Self {
        ring.from_base(x)
    }
    fn plus(&self, other: &Self) -> Self {
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicElt { ring: self.ring.clone(), coeffs: c }
    }
    fn minus(&self, other: &Self) -> Self {
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        CyclotomicElt { ring: self.ring.clone(), coeffs: c }
    }
    fn negate(&self) -> Self {
        CyclotomicElt { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
    fn times(&self, other: &Self) -> Self {
        let deg = self.coeffs.len();
        let ctx = self.ring.context();
        let mut c = vec![ctx.zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() && a.precision() == ctx.digits() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        CyclotomicElt::new(self.ring.clone(), c)
    }
    fn scale(&self, x: &PadicInt) -> Self {
        CyclotomicElt { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|a| a * x).collect() }
    }
    fn div_p_pow(&self, e: u32) -> Result<Self> {
        let c = self.coeffs.iter().map(|a| a.div_p_pow(e)).collect::<Result<Vec<_>>>()?;
        Ok(CyclotomicElt { ring: self.ring.clone(), coeffs: c })
    }
    fn inverse(&self) -> Result<Self> {
        self.newton_inverse()
    }
    fn ramified_valuation(&self) -> (Valuation, u32) {
        let e = self.ring.ramification();
        let coords = match self.pi_coordinates() {
            Ok(c) => c,
            Err(_) => return (Valuation::AtLeast(0), e),
        };
        let e64 = e as u64;
        let mut exact: Option<u64> = None;
        let mut bound = u64::MAX;
        for (idx, c) in coords.iter().enumerate() {
            let j = (idx as u64) % e64;
            match c.valuation() {
                Valuation::Exact(v) => {
                    let w = e64 * v as u64 + j;
                    exact = Some(exact.map_or(w, |x| x.min(w)));
                }
                Valuation::AtLeast(k) => bound = bound.min(e64 * k as u64 + j),
            }
        }
        let clamp = |x: u64| x.min(u32::MAX as u64) as u32;
        match exact {
            Some(v) if v < bound => (Valuation::Exact(clamp(v)), e),
            Some(v) => (Valuation::AtLeast(clamp(v.min(bound))), e),
            None => (Valuation::AtLeast(clamp(bound)), e),
        }
    }
    fn is_unit(&self) -> bool {
        let p = self.ring.context().p();
        let a: Vec<u64> = self.coeffs.iter().map(|c| (c.residue() % p).to_u64().unwrap_or(0)).collect();
        let phi: Vec<u64> = self
            .ring
            .0
            .phi_int
            .iter()
            .map(|c| c.mod_floor(&BigInt::from(p)).to_u64().unwrap_or(0))
            .collect();
        Coeff::precision(self) > 0 && fp_inverse_mod(&a, &phi, p).is_some()
    }
    fn precision(&self) -> u32 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap_or(0)
    }
    fn cap_precision(&self, k: u32) -> Self {
        CyclotomicElt { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|c| c.with_precision(k)).collect() }
    }
    fn agrees_with(&self, other: &Self) -> bool {
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a.agrees_with(b))
    }
}

impl fmt::Display for CyclotomicElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("[{c}]"),
                1 => format!("[{c}]x"),
                _ => format!("[{c}]x^{i}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for CyclotomicElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {:?}", self.ring)
    }
}

/// `F(zeta - 1)` together with the pi-adic accuracy it is certified to.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: CyclotomicElt,
    /// The true value agrees with `value` modulo `pi^pi_accuracy`.
    pub pi_accuracy: u64,
}

/// `F(zeta_{p^n} - 1)` in `Z_p[zeta_{p^n}]`.
///
/// The unseen tail `sum_{i >= M} c_i pi^i` has valuation at least `M`, and a
/// coefficient known to `k_i` digits contributes an error of valuation
/// `e k_i + i`; the smaller of these is the certified accuracy.
pub fn eval_at_level(f: &IwasawaSeries, n: u32) -> Result<Evaluation> {
    let ring = CyclotomicRing::level(f.context(), n)?;
    eval_in_ring(f, &ring)
}

pub fn eval_in_ring(f: &IwasawaSeries, ring: &CyclotomicRing) -> Result<Evaluation> {
    if ring.0.m != 1 || ring.0.n == 0 {
        return Err(Error::DomainError("evaluation needs a ring Z_p[zeta_{p^n}] with n >= 1".into()));
    }
    let m = f.len();
    let e = ring.ramification() as u64;
    let mut acc = ring.from_base(&f.coeffs()[m - 1]);
    for i in (0..m - 1).rev() {
        acc = acc.mul_x_minus_one().plus(&ring.from_base(&f.coeffs()[i]));
    }
    let pi_accuracy = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| e * c.precision() as u64 + i as u64)
        .fold(m as u64, u64::min);
    Ok(Evaluation { value: acc, pi_accuracy })
}

/// The norm `N(a)` to `Z_p`: the product of all Galois conjugates.
pub fn norm_to_base(a: &CyclotomicElt) -> PadicInt {
    let r = &a.ring;
    let ctx = r.context();
    if r.degree() == 1 {
        return a.coeffs[0].clone();
    }
    if ctx.p() == 2 && r.0.m == 1 {
        return two_power_tower_norm(a.coeffs.clone(), ctx);
    }
    determinant(ctx, a.multiplication_matrix())
}

/// `N(a) = a_e(y)^2 - y a_o(y)^2` one layer at a time, where
/// `a(x) = a_e(x^2) + x a_o(x^2)` in `Z_2[x]/(x^(2k) + 1)`.
fn two_power_tower_norm(mut c: Vec<PadicInt>, ctx: &PadicContext) -> PadicInt {
    while c.len() > 1 {
        let half = c.len() / 2;
        let ev: Vec<PadicInt> = c.iter().step_by(2).cloned().collect();
        let od: Vec<PadicInt> = c.iter().skip(1).step_by(2).cloned().collect();
        let sq_e = negacyclic_square(&ev, ctx);
        let sq_o = negacyclic_square(&od, ctx);
        // y * a_o(y)^2 in Z_2[y]/(y^half + 1)
        let mut y_sq_o = vec![ctx.zero(); half];
        for i in 0..half {
            if i + 1 < half {
                y_sq_o[i + 1] = sq_o[i].clone();
            } else {
                y_sq_o[0] = -&sq_o[i];
            }
        }
        c = (0..half).map(|i| &sq_e[i] - &y_sq_o[i]).collect();
    }
    c.pop().unwrap_or_else(|| ctx.zero())
}

/// Square in `Z_p[y]/(y^k + 1)` (for `k = 1` this is `Z_p` with `y = -1`).
fn negacyclic_square(a: &[PadicInt], ctx: &PadicContext) -> Vec<PadicInt> {
    let k = a.len();
    let mut out = vec![ctx.zero(); k];
    for i in 0..k {
        for j in 0..k {
            let t = &a[i] * &a[j];
            let s = i + j;
            if s < k {
                out[s] = &out[s] + &t;
            } else {
                out[s - k] = &out[s - k] - &t;
            }
        }
    }
    out
}

/// Determinant over `Z_p` by elimination with pivots of least valuation.
pub fn determinant(ctx: &PadicContext, mut a: Vec<Vec<PadicInt>>) -> PadicInt {
    let n = a.len();
    let mut det = ctx.one();
    for col in 0..n {
        let mut best: Option<(u32, usize, usize)> = None;
        for (r, row) in a.iter().enumerate().skip(col) {
            for (c, x) in row.iter().enumerate().skip(col) {
                if let Valuation::Exact(v) = x.valuation() {
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, r, c));
                    }
                }
            }
        }
        let Some((v, r, c)) = best else {
            // everything left vanishes to precision
            let k = a[col..].iter().flat_map(|row| row[col..].iter().map(|x| x.precision())).min().unwrap_or(0);
            return &det * &ctx.zero().with_precision(k);
        };
        if r != col {
            a.swap(r, col);
            det = -&det;
        }
        if c != col {
            for row in a.iter_mut() {
                row.swap(c, col);
            }
            det = -&det;
        }
        let pivot = a[col][col].clone();
        det = &det * &pivot;
        let unit_inv = pivot.div_p_pow(v).and_then(|u| u.inv()).expect("pivot has exact valuation");
        for r2 in col + 1..n {
            if a[r2][col].is_zero() && a[r2][col].precision() == ctx.digits() {
                continue;
            }
            let factor = &a[r2][col].div_p_pow(v).unwrap_or_else(|_| ctx.zero().with_precision(0)) * &unit_inv;
            for c2 in col..n {
                let t = &factor * &a[col][c2];
                a[r2][c2] = &a[r2][c2] - &t;
            }
        }
    }
    det
}

/// Inverse of a matrix over `Z_p` with unit determinant.
fn invert_matrix(ctx: &PadicContext, m: &[Vec<PadicInt>]) -> Option<Vec<Vec<PadicInt>>> {
    let n = m.len();
    let mut a: Vec<Vec<PadicInt>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { ctx.one() } else { ctx.zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col].is_unit())?;
        a.swap(piv, col);
        let inv = a[col][col].inv().ok()?;
        a[col] = a[col].iter().map(|x| x * &inv).collect();
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub(crate) fn fp_trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    if v.is_empty() {
        v.push(0);
    }
    v
}

pub(crate) fn fp_inv(x: u64, p: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, x % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub(crate) fn fp_is_zero(v: &[u64]) -> bool {
    v.iter().all(|&c| c == 0)
}

pub(crate) fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let b = fp_trim(b.to_vec());
    let mut r = fp_trim(a.to_vec());
    let db = b.len() - 1;
    let lead = fp_inv(b[db], p);
    let mut q = vec![0u64; r.len().saturating_sub(db).max(1)];
    while !fp_is_zero(&r) && r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r[r.len() - 1] * lead % p;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[i + shift] = (r[i + shift] + p - c * bi % p) % p;
        }
        r = fp_trim(r);
        if r.len() - 1 < db || (r.len() == 1 && r[0] == 0) {
            break;
        }
    }
    (fp_trim(q), r)
}

pub(crate) fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    fp_trim(out)
}

pub(crate) fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let g = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
    fp_trim((0..n).map(|i| (g(a, i) + p - g(b, i)) % p).collect())
}

/// Inverse of `a` modulo `m` in `F_p[x]`, if `gcd(a, m) = 1`.
pub(crate) fn fp_inverse_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let deg = fp_trim(m.to_vec()).len() - 1;
    let mut r0 = fp_trim(m.to_vec());
    let mut r1 = fp_divrem(a, m, p).1;
    let mut s0 = vec![0u64];
    let mut s1 = vec![1u64];
    while !fp_is_zero(&r1) {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if r0.len() != 1 || r0[0] == 0 {
        return None;
    }
    let c = fp_inv(r0[0], p);
    let s: Vec<u64> = s0.iter().map(|x| x * c % p).collect();
    let mut s = fp_divrem(&s, m, p).1;
    s.resize(deg.max(1), 0);
    Some(s)
}

/// `(s, t)` with `s a + t b = 1` modulo `m` in `F_p[x]`, if the three
/// polynomials have no common factor.
pub(crate) fn fp_bezout_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Option<(Vec<u64>, Vec<u64>)> {
    let (mut r0, mut r1) = (fp_trim(a.to_vec()), fp_trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![1u64], vec![0u64]);
    let (mut t0, mut t1) = (vec![0u64], vec![1u64]);
    while !fp_is_zero(&r1) {
        let (q, r) = fp_divrem(&r0, &r1, p);
        let s2 = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t2 = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let g_inv = fp_inverse_mod(&r0, m, p)?;
    let s = fp_divrem(&fp_mul(&s0, &g_inv, p), m, p).1;
    let t = fp_divrem(&fp_mul(&t0, &g_inv, p), m, p).1;
    Some((s, t))
}

impl CyclotomicElt {
    /// Reduction modulo `p` as an `F_p` polynomial.
    pub(crate) fn mod_p(&self) -> Vec<u64> {
        let p = self.ring.context().p();
        self.coeffs
            .iter()
            .map(|c| if c.precision() == 0 { 0 } else { (c.residue() % p).to_u64().expect("residue fits") })
            .collect()
    }

    /// `Phi_d` modulo `p`.
    pub(crate) fn modulus_mod_p(ring: &CyclotomicRing) -> Vec<u64> {
        let p = BigInt::from(ring.context().p());
        ring.phi_int().iter().map(|c| c.mod_floor(&p).to_u64().expect("residue fits")).collect()
    }
}

/// One row of the table produced by [`invariant_identity_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub n: u32,
    pub mu: u32,
    pub lambda: usize,
    /// `mu * phi(p^n) + lambda`.
    pub lhs: u64,
    /// `ord_p N(F(zeta_{p^n} - 1))`.
    pub rhs: u64,
    pub matches: bool,
    /// `phi(p^n) > lambda`, the range where the two sides must agree.
    pub guaranteed: bool,
}

/// Compare `mu * phi(p^n) + lambda` with `ord_p` of the norm of
/// `F(zeta_{p^n} - 1)`.
pub fn invariant_identity_check(f: &IwasawaSeries, n: u32) -> Result<InvariantReport> {
    let ml = f.mu_lambda()?;
    if n == 0 {
        return Err(Error::DomainError("level must be at least 1".into()));
    }
    let e = euler_phi(f.context().p().pow(n));
    let lhs = ml.mu as u64 * e + ml.lambda as u64;
    let ev = eval_at_level(f, n)?;
    let norm = norm_to_base(&ev.value);
    let rhs = match norm.valuation() {
        Valuation::Exact(v) if (v as u64) < ev.pi_accuracy => v as u64,
        other => {
            let need = other.lower_bound() as u64 + 1;
            return Err(Error::PrecisionExhausted(format!(
                "norm valuation {other} is not certified below pi-accuracy {}; T-precision M >= {need} and matching p-adic digits would suffice",
                ev.pi_accuracy
            )));
        }
    };
    Ok(InvariantReport {
        n,
        mu: ml.mu,
        lambda: ml.lambda,
        lhs,
        rhs,
        matches: lhs == rhs,
        guaranteed: e > ml.lambda as u64,
    })
}

/// Integer resultant-style norm of an integer polynomial: `prod a(zeta)`
/// over primitive `d`-th roots, by exact determinant of the multiplication
/// matrix modulo `Phi_d`.
pub fn integer_norm(a: &[i64], d: u64) -> BigInt {
    let phi = cyclotomic_polynomial(d);
    let deg = phi.len() - 1;
    let reduce = |mut c: Vec<BigInt>| {
        for i in (deg..c.len()).rev() {
            let top = c[i].clone();
            for j in 0..deg {
                c[i - deg + j] -= &top * &phi[j];
            }
        }
        c.truncate(deg);
        c.resize(deg, BigInt::zero());
        c
    };
    let mut cols = Vec::with_capacity(deg);
    let mut cur = reduce(a.iter().map(|&x| BigInt::from(x)).collect());
    for _ in 0..deg {
        cols.push(cur.clone());
        let mut shifted = vec![BigInt::zero()];
        shifted.extend(cur.iter().cloned());
        cur = reduce(shifted);
    }
    let m: Vec<Vec<BigInt>> = (0..deg).map(|r| (0..deg).map(|c| cols[c][r].clone()).collect()).collect();
    bareiss_determinant(m)
}

/// Fraction-free determinant of an integer matrix.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}
