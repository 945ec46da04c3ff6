//! Measures on `Gamma' x H` with `Gamma'` procyclic, written as families
//! `nu = sum_h nu_h h` of series in `T = gamma_0 - 1`, together with
//! pseudo-measures, character components and the attached `L_p` values.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{fp_bezout_mod, CyclotomicElt, CyclotomicRing};
use crate::error::{Error, Result};
use crate::mahler::series_moments;
use crate::padic::{u64_valuation, PadicContext, PadicInt, Valuation};
use crate::series::{Coeff, IwasawaSeries, Series};

/// An element of `H`, as exponents of the generators.
pub type Element = Vec<u64>;

/// `Z/d_1 x ... x Z/d_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    pub orders: Vec<u64>,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::DomainError("cyclic factors must have positive order".into()));
        }
        Ok(FiniteAbelianGroup { orders })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { orders: Vec::new() }
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn identity(&self) -> Element {
        vec![0; self.orders.len()]
    }

    pub fn normalize(&self, e: &[i64]) -> Result<Element> {
        if e.len() != self.orders.len() {
            return Err(Error::DimensionMismatch(format!(
                "element has {} exponents, group has {} generators",
                e.len(),
                self.orders.len()
            )));
        }
        Ok(e.iter().zip(&self.orders).map(|(&x, &d)| x.rem_euclid(d as i64) as u64).collect())
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Element {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), d)| (x + y) % d).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Element {
        a.iter().zip(&self.orders).map(|(x, d)| (d - x % d) % d).collect()
    }

    pub fn scalar(&self, k: u64, a: &[u64]) -> Element {
        a.iter().zip(&self.orders).map(|(x, d)| (x * (k % d)) % d).collect()
    }

    pub fn elements(&self) -> Vec<Element> {
        let mut out = vec![self.identity()];
        for (i, &d) in self.orders.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for e in &out {
                for x in 0..d {
                    let mut f = e.clone();
                    f[i] = x;
                    next.push(f);
                }
            }
            out = next;
        }
        out
    }

    /// All characters, as exponent vectors.
    pub fn characters(&self) -> Vec<CharacterOfH> {
        self.elements().into_iter().map(|e| CharacterOfH { group: self.clone(), exps: e }).collect()
    }
}

/// `chi(gen_i) = zeta_{d_i}^{e_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterOfH {
    pub group: FiniteAbelianGroup,
    pub exps: Vec<u64>,
}

impl CharacterOfH {
    pub fn new(group: &FiniteAbelianGroup, exps: &[i64]) -> Result<Self> {
        Ok(CharacterOfH { group: group.clone(), exps: group.normalize(exps)? })
    }

    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        CharacterOfH { group: group.clone(), exps: group.identity() }
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn inverse(&self) -> Self {
        CharacterOfH { group: self.group.clone(), exps: self.group.neg(&self.exps) }
    }

    /// The order of `chi`, which is also the order of its values.
    pub fn order(&self) -> u64 {
        self.exps.iter().zip(&self.group.orders).fold(1u64, |acc, (&e, &d)| {
            let o = d / num_integer::gcd(e, d);
            num_integer::lcm(acc, o)
        })
    }

    /// The ring `Z_p[x] / Phi_d` holding the values, `d` the order of `chi`.
    pub fn value_ring(&self, ctx: &PadicContext) -> Result<CyclotomicRing> {
        CyclotomicRing::new(ctx, self.order())
    }

    /// `chi(h) = zeta_d^k`; returns `k mod d`.
    pub fn exponent_at(&self, h: &[u64]) -> u64 {
        let d = self.order();
        self.exps
            .iter()
            .zip(h)
            .zip(&self.group.orders)
            .map(|((&e, &x), &di)| (e * x % di) * (d / di.max(1)) % d.max(1))
            .sum::<u64>()
            % d.max(1)
    }

    pub fn value(&self, ring: &CyclotomicRing, h: &[u64]) -> CyclotomicElt {
        ring.zeta_pow(self.exponent_at(h) as i64)
    }
}

impl fmt::Display for CharacterOfH {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A homomorphism `H -> H'` given by the images of the generators of `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientMap {
    pub target: FiniteAbelianGroup,
    pub images: Vec<Element>,
}

impl QuotientMap {
    pub fn apply(&self, h: &[u64]) -> Element {
        let mut out = self.target.identity();
        for (x, img) in h.iter().zip(&self.images) {
            out = self.target.add(&out, &self.target.scalar(*x, img));
        }
        out
    }

    fn validate(&self, source: &FiniteAbelianGroup) -> Result<()> {
        if self.images.len() != source.orders.len()
            || self.images.iter().any(|i| i.len() != self.target.orders.len())
        {
            return Err(Error::NotAHomomorphism("images do not match the generators".into()));
        }
        for (i, (img, &d)) in self.images.iter().zip(&source.orders).enumerate() {
            if self.target.scalar(d, img) != self.target.identity() {
                return Err(Error::NotAHomomorphism(format!(
                    "generator {i} has order {d} but its image does not"
                )));
            }
        }
        let mut seen: BTreeSet<Element> = BTreeSet::from([self.target.identity()]);
        let mut frontier = vec![self.target.identity()];
        while let Some(x) = frontier.pop() {
            for img in &self.images {
                let y = self.target.add(&x, img);
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        if seen.len() as u64 != self.target.order() {
            return Err(Error::NotSurjective);
        }
        Ok(())
    }
}

/// `nu = sum_h nu_h h`, each `nu_h` a series in `T = gamma_0 - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaloisMeasure {
    pub group: FiniteAbelianGroup,
    ctx: PadicContext,
    m: usize,
    components: BTreeMap<Element, IwasawaSeries>,
}

impl GaloisMeasure {
    pub fn zero(group: &FiniteAbelianGroup, ctx: &PadicContext, m: usize) -> Self {
        GaloisMeasure { group: group.clone(), ctx: ctx.clone(), m, components: BTreeMap::new() }
    }

    /// The Dirac mass at `(gamma_0^k, h)`.
    pub fn dirac(group: &FiniteAbelianGroup, ctx: &PadicContext, m: usize, k: i64, h: &[u64]) -> Self {
        let mut nu = Self::zero(group, ctx, m);
        nu.components.insert(h.to_vec(), IwasawaSeries::one_plus_t_pow_int(ctx, k, m));
        nu
    }

    pub fn from_components(
        group: &FiniteAbelianGroup,
        ctx: &PadicContext,
        m: usize,
        components: impl IntoIterator<Item = (Element, IwasawaSeries)>,
    ) -> Result<Self> {
        let mut nu = Self::zero(group, ctx, m);
        for (h, s) in components {
            let h = group.normalize(&h.iter().map(|&x| x as i64).collect::<Vec<_>>())?;
            if s.context() != ctx {
                return Err(Error::ContextMismatch);
            }
            nu.accumulate(h, &s.truncate(m.min(s.len())))?;
        }
        Ok(nu)
    }

    fn accumulate(&mut self, h: Element, s: &IwasawaSeries) -> Result<()> {
        let next = match self.components.get(&h) {
            Some(old) => {
                let len = old.len().min(s.len());
                old.truncate(len).add(&s.truncate(len))?
            }
            None => s.clone(),
        };
        self.m = self.m.min(next.len());
        self.components.insert(h, next);
        Ok(())
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Element, &IwasawaSeries)> {
        self.components.iter()
    }

    pub fn component(&self, h: &[u64]) -> IwasawaSeries {
        self.components
            .get(h)
            .map(|s| s.truncate(self.m))
            .unwrap_or_else(|| IwasawaSeries::zero(&self.ctx, self.m))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::DimensionMismatch("measures live on different groups".into()));
        }
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (h, s) in &other.components {
            out.accumulate(h.clone(), s)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&self.ctx.from_i64(-1)))
    }

    pub fn scale(&self, c: &PadicInt) -> Self {
        let mut out = self.clone();
        for s in out.components.values_mut() {
            *s = s.scale_base(c);
        }
        out
    }

    /// Image under translation by `(gamma_0^k, h)`.
    pub fn pushforward_group(&self, k: i64, h: &[u64]) -> Self {
        let shift = IwasawaSeries::one_plus_t_pow_int(&self.ctx, k, self.m);
        let mut out = Self::zero(&self.group, &self.ctx, self.m);
        for (g, s) in &self.components {
            let moved = s.truncate(self.m).mul(&shift).expect("same ring");
            out.components.insert(self.group.add(g, h), moved);
        }
        out
    }

    /// Image on `Gamma' x H'`: components summed along the fibres.
    pub fn restrict_to_quotient(&self, map: &QuotientMap) -> Result<Self> {
        map.validate(&self.group)?;
        let mut out = Self::zero(&map.target, &self.ctx, self.m);
        for (h, s) in &self.components {
            out.accumulate(map.apply(h), &s.truncate(self.m))?;
        }
        Ok(out)
    }

    /// `sum_h chi(h) nu_h` over the value ring of `chi`.
    pub fn chi_component(&self, chi: &CharacterOfH) -> Result<Series<CyclotomicElt>> {
        if chi.group != self.group {
            return Err(Error::DimensionMismatch("character of a different group".into()));
        }
        let ring = chi.value_ring(&self.ctx)?;
        let mut acc = Series::<CyclotomicElt>::zero(&ring, self.m);
        for (h, s) in &self.components {
            let lifted = Series::<CyclotomicElt>::extend_scalars(&ring, &s.truncate(self.m));
            acc = acc.add(&lifted.scale(&chi.value(&ring, h)))?;
        }
        Ok(acc)
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.group == other.group
            && self
                .components
                .keys()
                .chain(other.components.keys())
                .all(|h| self.component(h).truncate(self.m.min(other.m)).agrees_with(&other.component(h).truncate(self.m.min(other.m))))
    }
}

/// A factor of the denominator of a pseudo-measure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DenominatorTerm {
    /// `1 - sigma^{-1}` with `sigma = (gamma_0^k, h)`.
    OneMinusInverse { k: i64, h: Element },
    /// `N alpha - sigma_alpha` with `sigma_alpha = (gamma_0^k, h)`.
    Alpha { n: i64, k: i64, h: Element },
}

impl DenominatorTerm {
    fn is_degenerate(&self) -> bool {
        match self {
            DenominatorTerm::OneMinusInverse { k, h } => *k == 0 && h.iter().all(|&x| x == 0),
            DenominatorTerm::Alpha { n, k, h } => *n == 1 && *k == 0 && h.iter().all(|&x| x == 0),
        }
    }

    /// Multiplication of a measure by this group-ring element.
    pub fn apply(&self, nu: &GaloisMeasure) -> Result<GaloisMeasure> {
        match self {
            DenominatorTerm::OneMinusInverse { k, h } => nu.sub(&nu.pushforward_group(-k, &nu.group.neg(h))),
            DenominatorTerm::Alpha { n, k, h } => nu.scale(&nu.ctx.from_i64(*n)).sub(&nu.pushforward_group(*k, h)),
        }
    }

    /// The image of the term in `D[[T]]` under `chi`.
    pub fn specialize(&self, chi: &CharacterOfH, ring: &CyclotomicRing, m: usize) -> Series<CyclotomicElt> {
        let ctx = ring.context();
        match self {
            DenominatorTerm::OneMinusInverse { k, h } => {
                let s = IwasawaSeries::one_plus_t_pow_int(ctx, -k, m);
                let chi_inv = chi.value(ring, &chi.group.neg(h));
                Series::one(ring, m).sub(&Series::extend_scalars(ring, &s).scale(&chi_inv)).expect("same ring")
            }
            DenominatorTerm::Alpha { n, k, h } => {
                let s = IwasawaSeries::one_plus_t_pow_int(ctx, *k, m);
                let nn = Series::constant(ring.from_i64(*n), m);
                nn.sub(&Series::extend_scalars(ring, &s).scale(&chi.value(ring, h))).expect("same ring")
            }
        }
    }
}

/// A measure divided by a product of group-ring elements.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoMeasure {
    pub numerator: GaloisMeasure,
    pub denominator: Vec<DenominatorTerm>,
}

impl From<GaloisMeasure> for PseudoMeasure {
    fn from(numerator: GaloisMeasure) -> Self {
        PseudoMeasure { numerator, denominator: Vec::new() }
    }
}

fn not_divisible(chi: &CharacterOfH, err: Error) -> Error {
    let reason = match err {
        Error::NonUnit => "denominator has a non-unit leading coefficient".to_string(),
        Error::NonIntegral(m) => m,
        Error::ZeroDivisor => "denominator vanishes".to_string(),
        other => other.to_string(),
    };
    Error::NotDivisible { chi: chi.exps.clone(), reason }
}

impl PseudoMeasure {
    fn with_term(&self, term: DenominatorTerm) -> Result<Self> {
        if term.is_degenerate() {
            return Err(Error::DegenerateDenominator(format!("{term:?} is zero in the group ring")));
        }
        let mut out = self.clone();
        out.denominator.push(term);
        Ok(out)
    }

    /// Divide by `1 - sigma_l^{-1}`, `sigma_l = (gamma_0^k, h)`.
    pub fn euler_factor_adjust(&self, k: i64, h: &[u64]) -> Result<Self> {
        self.with_term(DenominatorTerm::OneMinusInverse { k, h: h.to_vec() })
    }

    /// `nu_alpha / (N alpha - sigma_alpha)`.
    pub fn recover_from_alpha(nu_alpha: &GaloisMeasure, n: i64, k: i64, h: &[u64]) -> Result<Self> {
        PseudoMeasure::from(nu_alpha.clone()).with_term(DenominatorTerm::Alpha { n, k, h: h.to_vec() })
    }

    /// The `chi`-component of the numerator divided by that of the denominator.
    pub fn specialize(&self, chi: &CharacterOfH) -> Result<Series<CyclotomicElt>> {
        let num = self.numerator.chi_component(chi)?;
        self.divide_out(chi, num)
    }

    fn divide_out(&self, chi: &CharacterOfH, mut num: Series<CyclotomicElt>) -> Result<Series<CyclotomicElt>> {
        for term in &self.denominator {
            let den = term.specialize(chi, num.ring(), num.len());
            num = num.divide(&den).map_err(|e| not_divisible(chi, e))?;
        }
        Ok(num)
    }

    /// Every character component with the denominator cleared.
    pub fn normalize(&self) -> Result<Vec<(CharacterOfH, Series<CyclotomicElt>)>> {
        self.numerator
            .group
            .characters()
            .into_iter()
            .map(|chi| self.specialize(&chi).map(|s| (chi, s)))
            .collect()
    }
}

/// One measure `nu_alpha = (N alpha - sigma_alpha) nu` with its `alpha`-data.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaDatum {
    pub measure: GaloisMeasure,
    pub n: i64,
    pub k: i64,
    pub h: Element,
}

/// The `chi`-component of `nu` from two `alpha`-data whose denominators
/// generate the unit ideal of `D[[T]]`: with `a d_1 + b d_2` a unit,
/// `nu = (a nu_1 + b nu_2) / (a d_1 + b d_2)`.
pub fn recover_from_two_alphas(first: &AlphaDatum, second: &AlphaDatum, chi: &CharacterOfH) -> Result<Series<CyclotomicElt>> {
    let n1 = first.measure.chi_component(chi)?;
    let n2 = second.measure.chi_component(chi)?;
    let m = n1.len().min(n2.len());
    let ring = n1.ring().clone();
    let d1 = DenominatorTerm::Alpha { n: first.n, k: first.k, h: first.h.clone() }.specialize(chi, &ring, m);
    let d2 = DenominatorTerm::Alpha { n: second.n, k: second.k, h: second.h.clone() }.specialize(chi, &ring, m);
    let p = ring.context().p();
    let modulus = CyclotomicElt::modulus_mod_p(&ring);
    let (a, b) = fp_bezout_mod(&d1.coeff(0).mod_p(), &d2.coeff(0).mod_p(), &modulus, p).ok_or_else(|| {
        Error::NotDivisible { chi: chi.exps.clone(), reason: "the two denominators share a residual factor".into() }
    })?;
    let lift = |v: Vec<u64>| {
        let mut c: Vec<i64> = v.into_iter().map(|x| x as i64).collect();
        c.resize(ring.degree(), 0);
        ring.from_i64_poly(&c)
    };
    let (a, b) = (lift(a), lift(b));
    let num = n1.truncate(m).scale(&a).add(&n2.truncate(m).scale(&b))?;
    let den = d1.scale(&a).add(&d2.scale(&b))?;
    num.divide(&den).map_err(|e| not_divisible(chi, e))
}

/// The series `F(w, chi)`: the `chi^{-1}`-component with the denominator
/// cleared; for trivial `chi` the numerator is first multiplied by
/// `1 - gamma_0`.
pub fn iwasawa_function(nu: &PseudoMeasure, chi: &CharacterOfH) -> Result<Series<CyclotomicElt>> {
    let inv = chi.inverse();
    let mut num = nu.numerator.chi_component(&inv)?;
    if chi.is_trivial() {
        num = num.mul_t_pow(1).neg();
    }
    nu.divide_out(&inv, num)
}

/// `v_p(kappa_0 - 1)` must be 2 for `p = 2` and 1 for odd `p`.
fn check_generator(kappa0: &PadicInt) -> Result<()> {
    let want = if kappa0.p() == 2 { 2 } else { 1 };
    match (kappa0 - &kappa0.context().one()).valuation() {
        Valuation::Exact(v) if v == want => Ok(()),
        _ => Err(Error::DomainError(format!(
            "{kappa0} does not generate 1 + {}Z_p topologically",
            if want == 2 { 4 } else { kappa0.p() }
        ))),
    }
}

/// `L_p(s, chi)` computed as `F(kappa_0^s - 1)`.
pub fn lp_value_by_series(nu: &PseudoMeasure, chi: &CharacterOfH, s: &PadicInt, kappa0: &PadicInt) -> Result<CyclotomicElt> {
    check_generator(kappa0)?;
    let f = iwasawa_function(nu, chi)?;
    let z = &kappa0.kappa_power(s)? - &kappa0.context().one();
    f.eval(&f.ring().from_base(&z))
}

/// `L_p(s, chi) = integral kappa^s dF = sum_j (s log kappa_0)^j / j! * m_j`,
/// with `m_j` the moments of the `chi^{-1}`-component on `Gamma' = Z_p`.
pub fn lp_value(nu: &PseudoMeasure, chi: &CharacterOfH, s: &PadicInt, kappa0: &PadicInt) -> Result<CyclotomicElt> {
    check_generator(kappa0)?;
    let f = iwasawa_function(nu, chi)?;
    let ctx = kappa0.context().clone();
    let p = ctx.p();
    let x = s * &kappa0.log()?;
    let vx = x.val_bound().max(if p == 2 { 2 } else { 1 });
    let target = ctx.digits();
    // smallest j with j v(x) - v(j!) >= target bounds every later term
    let mut needed = 0u64;
    let mut fact_v = 0u64;
    while needed * vx as u64 - fact_v < target as u64 {
        needed += 1;
        fact_v += u64_valuation(needed, p) as u64;
    }
    let count = (needed as usize).min(f.len());
    let moments = series_moments(&f, count)?;
    let mut term = ctx.one();
    let mut acc = f.ring().zero();
    for (j, mj) in moments.iter().enumerate() {
        if j > 0 {
            let jj = j as u64;
            let v = u64_valuation(jj, p);
            let unit = ctx.from_i64((jj / p.pow(v)) as i64).inv()?;
            term = (&term * &x).div_p_pow(v)?;
            term = &term * &unit;
        }
        acc = acc.plus(&mj.scale(&term));
    }
    if count < needed as usize {
        let jj = count as u64;
        let tail = jj * vx as u64 - (1..=jj).map(|i| u64_valuation(i, p) as u64).sum::<u64>();
        acc = acc.cap_precision(tail.min(target as u64) as u32);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PadicContext {
        PadicContext::two_adic()
    }

    fn klein() -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(vec![2, 2]).unwrap()
    }

    fn sample(group: &FiniteAbelianGroup, m: usize) -> GaloisMeasure {
        let c = ctx();
        let mut nu = GaloisMeasure::zero(group, &c, m);
        for (i, h) in group.elements().into_iter().enumerate() {
            let coeffs: Vec<i64> = (0..5).map(|j| ((i as i64 + 3) * (j + 2) * 7 + j * j) % 23 - 11).collect();
            nu = nu.add(&GaloisMeasure::from_components(group, &c, m, [(h, IwasawaSeries::from_i64s(&c, &coeffs, m))]).unwrap()).unwrap();
        }
        nu
    }

    #[test]
    fn pushforward_examples() {
        let c = ctx();
        let g = klein();
        let nu = sample(&g, 12);
        assert_eq!(nu.pushforward_group(0, &g.identity()), nu);
        let d = GaloisMeasure::dirac(&g, &c, 12, 0, &[1, 0]);
        let pushed = d.pushforward_group(1, &g.identity());
        assert_eq!(pushed.component(&[1, 0]), IwasawaSeries::from_i64s(&c, &[1, 1], 12));
        let back = nu.pushforward_group(3, &[1, 1]).pushforward_group(-3, &[1, 1]);
        assert!(back.agrees_with(&nu));
    }

    #[test]
    fn quotient_examples() {
        let c = ctx();
        let g = klein();
        let nu = sample(&g, 10);
        let to_trivial = QuotientMap { target: FiniteAbelianGroup::trivial(), images: vec![vec![], vec![]] };
        let total = nu.restrict_to_quotient(&to_trivial).unwrap();
        let mut sum = IwasawaSeries::zero(&c, 10);
        for h in g.elements() {
            sum = sum.add(&nu.component(&h)).unwrap();
        }
        assert_eq!(total.component(&[]), sum);
        let id = QuotientMap { target: g.clone(), images: vec![vec![1, 0], vec![0, 1]] };
        assert_eq!(nu.restrict_to_quotient(&id).unwrap(), nu);
        let first = QuotientMap { target: FiniteAbelianGroup::new(vec![2]).unwrap(), images: vec![vec![1], vec![0]] };
        let q = nu.restrict_to_quotient(&first).unwrap();
        for a in 0..2u64 {
            let brute = nu.component(&[a, 0]).add(&nu.component(&[a, 1])).unwrap();
            assert_eq!(q.component(&[a]), brute);
        }
        let bad = QuotientMap { target: FiniteAbelianGroup::new(vec![3]).unwrap(), images: vec![vec![1], vec![0]] };
        assert!(matches!(nu.restrict_to_quotient(&bad), Err(Error::NotAHomomorphism(_))));
        let thin = QuotientMap { target: FiniteAbelianGroup::new(vec![4]).unwrap(), images: vec![vec![2], vec![0]] };
        assert!(matches!(nu.restrict_to_quotient(&thin), Err(Error::NotSurjective)));
    }

    #[test]
    fn chi_component_examples() {
        let c = ctx();
        let g = FiniteAbelianGroup::new(vec![4]).unwrap();
        let chi = CharacterOfH::new(&g, &[1]).unwrap();
        let d = GaloisMeasure::dirac(&g, &c, 8, 0, &[3]);
        let comp = d.chi_component(&chi).unwrap();
        let ring = chi.value_ring(&c).unwrap();
        assert_eq!(comp.coeff(0), ring.zeta_pow(3));
        assert!(comp.coeffs()[1..].iter().all(|x| x.is_zero()));
        let nu = sample(&g, 8);
        let pushed = nu.pushforward_group(2, &[1]).chi_component(&chi).unwrap();
        let shift = Series::extend_scalars(&ring, &IwasawaSeries::one_plus_t_pow_int(&c, 2, 8));
        let expected = nu.chi_component(&chi).unwrap().mul(&shift).unwrap().scale(&ring.zeta());
        assert_eq!(pushed, expected);
    }

    #[test]
    fn euler_factor_division() {
        let g = FiniteAbelianGroup::new(vec![3]).unwrap();
        let nu = sample(&g, 12);
        let pm = PseudoMeasure::from(nu.clone()).euler_factor_adjust(2, &[1]).unwrap();
        let chi = CharacterOfH::new(&g, &[1]).unwrap();
        let q = pm.specialize(&chi).unwrap();
        let term = DenominatorTerm::OneMinusInverse { k: 2, h: vec![1] };
        let back = q.mul(&term.specialize(&chi, q.ring(), q.len())).unwrap();
        assert!(back.agrees_with(&nu.chi_component(&chi).unwrap().truncate(q.len())));
        assert!(matches!(
            PseudoMeasure::from(nu.clone()).euler_factor_adjust(0, &[0]),
            Err(Error::DegenerateDenominator(_))
        ));
        let trivial = CharacterOfH::trivial(&g);
        let pm = PseudoMeasure::from(nu).euler_factor_adjust(4, &[1]).unwrap();
        assert!(matches!(pm.specialize(&trivial), Err(Error::NotDivisible { .. })));
    }

    #[test]
    fn alpha_round_trip() {
        let g = FiniteAbelianGroup::new(vec![3]).unwrap();
        let mu = sample(&g, 12);
        let term = DenominatorTerm::Alpha { n: 5, k: 1, h: vec![1] };
        let nu_alpha = term.apply(&mu).unwrap();
        let pm = PseudoMeasure::recover_from_alpha(&nu_alpha, 5, 1, &[1]).unwrap();
        for chi in g.characters() {
            let got = pm.specialize(&chi);
            if chi.is_trivial() {
                // 5 - 1 = 4 is not a unit 2-adically
                assert!(matches!(got, Err(Error::NotDivisible { .. })));
                assert!(pm.normalize().is_err());
            } else {
                let s = got.unwrap();
                assert!(s.agrees_with(&mu.chi_component(&chi).unwrap().truncate(s.len())));
            }
        }
        assert!(matches!(
            PseudoMeasure::recover_from_alpha(&nu_alpha, 1, 0, &[0]),
            Err(Error::DegenerateDenominator(_))
        ));
    }

    #[test]
    fn two_alphas() {
        // p = 5, chi of order 4: Z_5[i] splits as Z_5 x Z_5 (i = 2 or 3 mod 5),
        // so 2 - i and 3 - i are each a non-unit, but together generate 1
        let c = PadicContext::new(5, 20).unwrap();
        let g = FiniteAbelianGroup::new(vec![4]).unwrap();
        let mut mu = GaloisMeasure::zero(&g, &c, 10);
        for h in 0..4u64 {
            let s = IwasawaSeries::from_i64s(&c, &[h as i64 + 1, 7, -3, 2 * h as i64], 10);
            mu = mu.add(&GaloisMeasure::from_components(&g, &c, 10, [(vec![h], s)]).unwrap()).unwrap();
        }
        let chi = CharacterOfH::new(&g, &[1]).unwrap();
        let datum = |n: i64| {
            let t = DenominatorTerm::Alpha { n, k: 1, h: vec![1] };
            AlphaDatum { measure: t.apply(&mu).unwrap(), n, k: 1, h: vec![1] }
        };
        let (a1, a2) = (datum(2), datum(3));
        for a in [&a1, &a2] {
            let single = PseudoMeasure::recover_from_alpha(&a.measure, a.n, a.k, &a.h).unwrap();
            assert!(matches!(single.specialize(&chi), Err(Error::NotDivisible { .. })));
        }
        let both = recover_from_two_alphas(&a1, &a2, &chi).unwrap();
        assert!(both.agrees_with(&mu.chi_component(&chi).unwrap().truncate(both.len())));
        let same = recover_from_two_alphas(&a1, &datum(2), &chi);
        assert!(matches!(same, Err(Error::NotDivisible { .. })));
    }

    #[test]
    fn iwasawa_function_examples() {
        let c = ctx();
        let g = FiniteAbelianGroup::new(vec![2]).unwrap();
        let d = PseudoMeasure::from(GaloisMeasure::dirac(&g, &c, 10, 1, &[0]));
        let f = iwasawa_function(&d, &CharacterOfH::trivial(&g)).unwrap();
        let expected = IwasawaSeries::from_i64s(&c, &[0, -1, -1], 10);
        let base: Vec<PadicInt> = f.coeffs().iter().map(|x| x.as_base().unwrap()).collect();
        assert_eq!(base, expected.coeffs().to_vec());
        let on_h = PseudoMeasure::from(GaloisMeasure::dirac(&g, &c, 10, 0, &[1]));
        let f = iwasawa_function(&on_h, &CharacterOfH::new(&g, &[1]).unwrap()).unwrap();
        assert!(f.coeffs()[1..].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn lp_examples() {
        let c = ctx();
        let kappa = c.from_i64(5);
        let g = FiniteAbelianGroup::new(vec![4]).unwrap();
        let chi = CharacterOfH::new(&g, &[1]).unwrap();
        let ring = chi.value_ring(&c).unwrap();
        let d = PseudoMeasure::from(GaloisMeasure::dirac(&g, &c, 40, 1, &[1]));
        let s = c.from_i64(3);
        let v = lp_value(&d, &chi, &s, &kappa).unwrap();
        let expected = chi.inverse().value(&ring, &[1]).scale(&c.from_i64(125));
        assert!(v.agrees_with(&expected), "{v} vs {expected}");
        let w = lp_value_by_series(&d, &chi, &s, &kappa).unwrap();
        assert!(w.agrees_with(&expected));
        let nu = PseudoMeasure::from(sample(&g, 40));
        let zero = lp_value(&nu, &chi, &c.zero(), &kappa).unwrap();
        assert_eq!(zero, nu.numerator.chi_component(&chi.inverse()).unwrap().coeff(0));
        for s in [1i64, -2, 7] {
            let s = c.from_i64(s);
            let a = lp_value(&nu, &chi, &s, &kappa).unwrap();
            let b = lp_value_by_series(&nu, &chi, &s, &kappa).unwrap();
            assert!(a.agrees_with(&b));
        }
        assert!(lp_value(&d, &chi, &s, &c.from_i64(3)).is_err());
    }
}
