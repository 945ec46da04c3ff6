//! Weierstrass division and preparation in `Z_p[[T]]`.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::cyclotomic::{fp_inverse_mod, fp_mul, fp_sub, fp_trim};
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicInt};
use crate::series::IwasawaSeries;

/// `F = p^mu * P * U` with `P` distinguished of degree `lambda` and `U` a unit.
#[derive(Debug, Clone, PartialEq)]
pub struct WeierstrassData {
    pub mu: u32,
    /// Coefficients of `P`, constant term first, monic of degree `lambda`.
    pub poly: Vec<PadicInt>,
    /// Unit series, known modulo `T^(M - lambda)`.
    pub unit: IwasawaSeries,
}

impl WeierstrassData {
    pub fn lambda(&self) -> usize {
        self.poly.len() - 1
    }

    /// `P` as a series with the window of the unit part.
    pub fn poly_series(&self) -> IwasawaSeries {
        let m = self.unit.len().max(self.poly.len());
        IwasawaSeries::from_poly(self.unit.context().clone(), self.poly.clone(), m)
    }

    /// `p^mu * P * U` on the window of `U`.
    pub fn reconstruct(&self) -> IwasawaSeries {
        let ctx = self.unit.context();
        let pu = self.poly_series().truncate(self.unit.len()).mul(&self.unit).expect("same ring");
        pu.map(|c| c.mul_p_pow(self.mu)).map(|c| c.with_precision(ctx.digits()))
    }

    /// Whether `P` is monic with all lower coefficients of positive valuation.
    pub fn is_distinguished(&self) -> bool {
        is_distinguished(&self.poly)
    }
}

pub fn is_distinguished(poly: &[PadicInt]) -> bool {
    let Some((lead, low)) = poly.split_last() else {
        return false;
    };
    let ctx = lead.context();
    lead.agrees_with(&ctx.one())
        && lead.precision() > 0
        && low.iter().all(|c| c.val_bound() >= 1 && c.precision() >= 1)
}

/// `tau_k(G)`: the coefficients of `T^k, T^(k+1), ...` shifted down.
fn tau(g: &IwasawaSeries, k: usize) -> IwasawaSeries {
    IwasawaSeries::new(g.ring().clone(), g.coeffs()[k..].to_vec())
}

/// A coefficient about which nothing is known.
fn unknown(ctx: &PadicContext) -> PadicInt {
    PadicInt::from_parts(ctx.clone(), BigUint::zero(), 0)
}

/// Extend to length `m`, with exact zeros or with unknown coefficients.
fn pad(s: &IwasawaSeries, m: usize, tail_known: bool) -> IwasawaSeries {
    let ctx = s.context();
    let mut c = s.coeffs().to_vec();
    while c.len() < m {
        c.push(if tail_known { ctx.zero() } else { unknown(ctx) });
    }
    IwasawaSeries::new(ctx.clone(), c)
}

/// Divide `H` by `G`, where `G` has a unit coefficient at `T^l` and all
/// lower coefficients divisible by `p`. Returns `(Q, R)` with
/// `H = Q G + R`, `deg R < l`, `Q` known modulo `T^(M - l)`.
///
/// Coefficients beyond the window are treated as unknown unless the
/// corresponding flag says the operand is a polynomial; their influence on the low coefficients of `Q`
/// is damped by one factor of `p` per step and shows up as reduced
/// precision there.
fn divide_general(
    h: &IwasawaSeries,
    g: &IwasawaSeries,
    l: usize,
    h_is_poly: bool,
    g_is_poly: bool,
) -> Result<(IwasawaSeries, IwasawaSeries)> {
    let m = if g_is_poly { h.len() } else { h.len().min(g.len()) };
    if l >= m {
        return Err(Error::PrecisionExhausted(format!(
            "degree {l} does not fit in a window of length {m}"
        )));
    }
    let ctx = h.context().clone();
    let h = h.truncate(m);
    let g = pad(&g.truncate(m), m, g_is_poly);
    let low = IwasawaSeries::from_poly(ctx.clone(), g.coeffs()[..l].to_vec(), m);
    let high_inv = pad(&tau(&g, l), m, g_is_poly).inverse()?;
    let mut q = pad(&tau(&h, l), m, h_is_poly).mul(&high_inv)?;
    for _ in 0..(ctx.digits() as usize + m + 2) {
        let rest = h.sub(&q.mul(&low)?)?;
        // the top of `rest` depends on coefficients of `q` beyond the window
        let next = pad(&tau(&rest, l), m, false).mul(&high_inv)?;
        if next == q {
            break;
        }
        q = next;
    }
    let r = h.sub(&q.mul(&g)?)?;
    let r = IwasawaSeries::new(ctx, r.coeffs()[..l].to_vec());
    Ok((q.truncate(m - l), r))
}

/// Weierstrass division `F = Q P + R` by a distinguished polynomial `P`
/// (given as a series whose coefficients vanish beyond its degree).
pub fn weierstrass_divide(f: &IwasawaSeries, p: &[PadicInt]) -> Result<(IwasawaSeries, IwasawaSeries)> {
    if !is_distinguished(p) {
        return Err(Error::DomainError("divisor is not a distinguished polynomial".into()));
    }
    let d = p.len() - 1;
    if d == 0 {
        return Ok((f.clone(), IwasawaSeries::zero(f.ring(), 1)));
    }
    let g = IwasawaSeries::from_poly(f.context().clone(), p.to_vec(), f.len().max(p.len()));
    divide_general(f, &g, d, false, true)
}

/// Weierstrass preparation of `F`, whose coefficients beyond the window
/// are unknown.
pub fn weierstrass_prepare(f: &IwasawaSeries) -> Result<WeierstrassData> {
    prepare(f)
}

/// Weierstrass preparation of a polynomial: coefficients beyond the window
/// are exactly zero. Then `F = p^mu P V` with `V` a polynomial, and the
/// factorization is lifted from `F / p^mu = T^lambda V mod p` one digit at a
/// time, so the window costs no p-adic precision.
pub fn weierstrass_prepare_polynomial(f: &IwasawaSeries) -> Result<WeierstrassData> {
    let ml = f.mu_lambda()?;
    let ctx = f.context().clone();
    let p = ctx.p();
    let g = f.div_p_pow(ml.mu)?;
    let m = g.len();
    let l = ml.lambda;
    if l == 0 {
        return Ok(WeierstrassData { mu: ml.mu, poly: vec![ctx.one()], unit: g });
    }
    let deg = g.coeffs().iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    let fc: Vec<PadicInt> = g.coeffs()[..=deg].to_vec();
    let digits = fc.iter().map(|c| c.precision()).min().unwrap_or(0);
    let residue = |c: &PadicInt| -> u64 {
        if c.precision() == 0 {
            0
        } else {
            (c.residue() % p).try_into().expect("small")
        }
    };
    let vbar: Vec<u64> = fc[l..].iter().map(residue).collect();
    let mut tl = vec![0u64; l + 1];
    tl[l] = 1;
    let t = fp_inverse_mod(&vbar, &tl, p).ok_or(Error::NonUnit)?;
    let mut poly: Vec<PadicInt> = (0..=l).map(|i| if i == l { ctx.one() } else { ctx.zero() }).collect();
    let mut v: Vec<PadicInt> = vbar.iter().map(|&x| ctx.from_i64(x as i64)).collect();
    for k in 1..digits {
        let mut err = fc.clone();
        for (i, a) in poly.iter().enumerate() {
            for (j, b) in v.iter().enumerate() {
                err[i + j] = &err[i + j] - &(a * b);
            }
        }
        if err.iter().all(|c| c.is_zero()) {
            break;
        }
        let e: Vec<u64> = err.iter().map(|c| c.div_p_pow(k).map(|x| residue(&x))).collect::<Result<_>>()?;
        let p1 = fp_trim({
            let mut x = fp_mul(&t, &e, p);
            x.truncate(l);
            x
        });
        let diff = fp_sub(&e, &fp_mul(&p1, &vbar, p), p);
        let v1: Vec<u64> = diff.iter().skip(l).copied().collect();
        let lift = |x: u64| ctx.from_i64(x as i64).mul_p_pow(k);
        for (i, &c) in p1.iter().enumerate().take(l) {
            poly[i] = &poly[i] + &lift(c);
        }
        for (j, &c) in v1.iter().enumerate() {
            if j < v.len() {
                v[j] = &v[j] + &lift(c);
            } else if c != 0 {
                return Err(Error::PrecisionExhausted("cofactor degree overflow".into()));
            }
        }
    }
    let poly = poly.into_iter().map(|c| c.with_precision(digits)).collect();
    let unit = IwasawaSeries::from_poly(ctx.clone(), v.into_iter().map(|c| c.with_precision(digits)).collect(), m - l);
    Ok(WeierstrassData { mu: ml.mu, poly, unit })
}

fn prepare(f: &IwasawaSeries) -> Result<WeierstrassData> {
    let ml = f.mu_lambda()?;
    let ctx: PadicContext = f.context().clone();
    let g = f.div_p_pow(ml.mu)?;
    let l = ml.lambda;
    if l == 0 {
        return Ok(WeierstrassData {
            mu: ml.mu,
            poly: vec![ctx.one()],
            unit: g,
        });
    }
    let m = g.len();
    let tl = IwasawaSeries::t_pow(&ctx, l, m);
    let (q, r) = divide_general(&tl, &g, l, true, false)?;
    let mut poly: Vec<PadicInt> = r.coeffs().iter().take(l).map(|c| -c).collect();
    while poly.len() < l {
        poly.push(ctx.zero());
    }
    poly.push(ctx.one());
    let unit = q.inverse()?;
    Ok(WeierstrassData { mu: ml.mu, poly, unit })
}
