//! Finitely presented torsion modules over `Lambda = Z_p[[T]]` and their
//! characteristic ideals.

use rand::Rng;
use crate::cyclotomic::{fp_divrem, fp_is_zero, fp_mul, fp_sub, fp_trim};
use crate::error::{Error, Result};
use crate::padic::{PadicContext, PadicInt};
use crate::series::IwasawaSeries;
use crate::weierstrass::{weierstrass_prepare, weierstrass_prepare_polynomial};

/// Largest presentation the subset expansion of the determinant accepts.
pub const MAX_RANK: usize = 16;

/// The cokernel of a square matrix over `Lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct PresentedModule {
    ctx: PadicContext,
    m: usize,
    matrix: Vec<Vec<IwasawaSeries>>,
    /// Entries are polynomials: coefficients beyond the window vanish.
    pub polynomial: bool,
}

/// `p^mu P` with `P` distinguished.
#[derive(Debug, Clone, PartialEq)]
pub struct CharIdeal {
    pub mu: u32,
    pub poly: Vec<PadicInt>,
}

impl CharIdeal {
    pub fn lambda(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn unit(ctx: &PadicContext) -> Self {
        CharIdeal { mu: 0, poly: vec![ctx.one()] }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let ctx = self.poly[0].context();
        let mut poly = vec![ctx.zero(); self.poly.len() + other.poly.len() - 1];
        for (i, a) in self.poly.iter().enumerate() {
            for (j, b) in other.poly.iter().enumerate() {
                poly[i + j] = &poly[i + j] + &(a * b);
            }
        }
        CharIdeal { mu: self.mu + other.mu, poly }
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.mu == other.mu
            && self.poly.len() == other.poly.len()
            && self.poly.iter().zip(&other.poly).all(|(a, b)| a.agrees_with(b))
    }
}

fn degree(s: &IwasawaSeries) -> usize {
    s.coeffs().iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

impl PresentedModule {
    pub fn new(ctx: &PadicContext, matrix: Vec<Vec<IwasawaSeries>>, polynomial: bool) -> Result<Self> {
        let r = matrix.len();
        if matrix.iter().any(|row| row.len() != r) {
            return Err(Error::DimensionMismatch("presentation matrix must be square".into()));
        }
        if matrix.iter().flatten().any(|s| s.context() != ctx) {
            return Err(Error::ContextMismatch);
        }
        let m = matrix.iter().flatten().map(|s| s.len()).min().unwrap_or(1);
        let matrix = matrix.into_iter().map(|row| row.into_iter().map(|s| s.truncate(m)).collect()).collect();
        Ok(PresentedModule { ctx: ctx.clone(), m, matrix, polynomial })
    }

    /// `Lambda / g_1 + ... + Lambda / g_k`.
    pub fn elementary(ctx: &PadicContext, gs: &[IwasawaSeries], polynomial: bool) -> Result<Self> {
        if gs.iter().any(|g| g.is_zero()) {
            return Err(Error::ZeroDivisor);
        }
        let m = gs.iter().map(|s| s.len()).min().unwrap_or(1);
        let matrix = (0..gs.len())
            .map(|i| {
                (0..gs.len())
                    .map(|j| if i == j { gs[i].truncate(m) } else { IwasawaSeries::zero(ctx, m) })
                    .collect()
            })
            .collect();
        Self::new(ctx, matrix, polynomial)
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn window(&self) -> usize {
        self.m
    }

    pub fn context(&self) -> &PadicContext {
        &self.ctx
    }

    pub fn matrix(&self) -> &[Vec<IwasawaSeries>] {
        &self.matrix
    }

    /// `[[A, glue], [0, C]]`, a presentation of an extension of `C` by `A`.
    pub fn ses_compose(a: &Self, c: &Self, glue: &[Vec<IwasawaSeries>]) -> Result<Self> {
        let (ra, rc) = (a.rank(), c.rank());
        if glue.len() != ra || glue.iter().any(|row| row.len() != rc) {
            return Err(Error::DimensionMismatch(format!("glue block must be {ra} x {rc}")));
        }
        let m = a.m.min(c.m);
        let zero = IwasawaSeries::zero(&a.ctx, m);
        let mut matrix = Vec::with_capacity(ra + rc);
        for (i, row) in a.matrix.iter().enumerate() {
            let mut r: Vec<IwasawaSeries> = row.iter().map(|s| s.truncate(m)).collect();
            r.extend(glue[i].iter().map(|s| s.truncate(m)));
            matrix.push(r);
        }
        for row in &c.matrix {
            let mut r = vec![zero.clone(); ra];
            r.extend(row.iter().map(|s| s.truncate(m)));
            matrix.push(r);
        }
        let polynomial = a.polynomial && c.polynomial;
        Self::new(&a.ctx, matrix, polynomial)
    }

    /// Determinant by expansion over column subsets: no divisions, so no
    /// p-adic precision is lost.
    pub fn determinant(&self) -> Result<IwasawaSeries> {
        let r = self.rank();
        if r == 0 {
            return Ok(IwasawaSeries::one(&self.ctx, self.m));
        }
        if r > MAX_RANK {
            return Err(Error::DimensionMismatch(format!("rank {r} exceeds {MAX_RANK}")));
        }
        let mut dp: Vec<Option<IwasawaSeries>> = vec![None; 1 << r];
        dp[0] = Some(IwasawaSeries::one(&self.ctx, self.m));
        for (i, row) in self.matrix.iter().enumerate() {
            let mut next: Vec<Option<IwasawaSeries>> = vec![None; 1 << r];
            for mask in (0usize..1 << r).filter(|m| m.count_ones() as usize == i) {
                let Some(acc) = &dp[mask] else { continue };
                for (j, entry) in row.iter().enumerate() {
                    if mask & (1 << j) != 0 || entry.is_zero() {
                        continue;
                    }
                    let mut term = acc.mul(entry)?;
                    if (mask >> j).count_ones() % 2 == 1 {
                        term = term.neg();
                    }
                    let slot = &mut next[mask | (1 << j)];
                    *slot = Some(match slot.take() {
                        Some(s) => s.add(&term)?,
                        None => term,
                    });
                }
            }
            dp = next;
        }
        Ok(dp.pop().flatten().unwrap_or_else(|| IwasawaSeries::zero(&self.ctx, self.m)))
    }

    fn determinant_is_polynomial(&self) -> bool {
        if !self.polynomial {
            return false;
        }
        let bound: usize = self
            .matrix
            .iter()
            .map(|row| row.iter().map(degree).max().unwrap_or(0))
            .sum();
        bound < self.m
    }

    /// The characteristic ideal: the prepared determinant, unit discarded.
    pub fn char_ideal(&self) -> Result<CharIdeal> {
        let det = self.determinant()?;
        if det.is_zero() {
            return Err(Error::NotTorsion);
        }
        let w = if self.determinant_is_polynomial() {
            weierstrass_prepare_polynomial(&det)?
        } else {
            weierstrass_prepare(&det)?
        };
        Ok(CharIdeal { mu: w.mu, poly: w.poly })
    }

    pub fn is_mu_zero(&self) -> Result<bool> {
        Ok(self.char_ideal()?.mu == 0)
    }

    /// Whether the module is finitely generated over `Z_p`, decided from
    /// `M / pM`, the cokernel of the presentation modulo `p`: it is finite
    /// exactly when the reduced determinant is nonzero in `F_p[[T]]`.
    pub fn is_finitely_generated_over_zp(&self) -> Result<bool> {
        let p = self.ctx.p();
        let reduce = |s: &IwasawaSeries| -> Vec<u64> {
            s.coeffs()
                .iter()
                .map(|c| if c.precision() == 0 { 0 } else { (c.residue() % p).try_into().expect("small") })
                .collect()
        };
        if self.rank() == 0 {
            return Ok(true);
        }
        let rows: Vec<Vec<Vec<u64>>> = self.matrix.iter().map(|row| row.iter().map(reduce).collect()).collect();
        if self.determinant_is_polynomial() {
            let det = fp_poly_determinant(rows, p);
            return Ok(!fp_is_zero(&det));
        }
        match fp_series_rank_is_full(rows, p, self.m) {
            Some(true) => Ok(true),
            _ => Err(Error::Indeterminate(
                "the reduction modulo p vanishes on the visible window".into(),
            )),
        }
    }

    /// A random unimodular change of basis on both sides.
    pub fn scramble<G: Rng>(&self, rng: &mut G, steps: usize) -> Self {
        let r = self.rank();
        let mut out = self.clone();
        if r == 0 {
            return out;
        }
        let ctx = self.ctx.clone();
        let m = self.m;
        let small = |rng: &mut G| -> IwasawaSeries {
            let c0 = rng.gen_range(-3i64..=3);
            let c1 = rng.gen_range(-2i64..=2);
            IwasawaSeries::from_i64s(&ctx, &[c0, c1], m)
        };
        for _ in 0..steps {
            let i = rng.gen_range(0..r);
            let j = rng.gen_range(0..r);
            match rng.gen_range(0..4) {
                0 if i != j => {
                    let c = small(rng);
                    for k in 0..r {
                        let add = out.matrix[j][k].mul(&c).expect("same ring");
                        out.matrix[i][k] = out.matrix[i][k].add(&add).expect("same ring");
                    }
                }
                1 if i != j => {
                    let c = small(rng);
                    for k in 0..r {
                        let add = out.matrix[k][j].mul(&c).expect("same ring");
                        out.matrix[k][i] = out.matrix[k][i].add(&add).expect("same ring");
                    }
                }
                2 => out.matrix.swap(i, j),
                _ => {
                    // a unit of Lambda: odd constant term (p = 2) or prime to p
                    let mut c0 = rng.gen_range(1i64..=7);
                    while (c0 as u64).is_multiple_of(ctx.p()) {
                        c0 += 1;
                    }
                    let u = IwasawaSeries::from_i64s(&ctx, &[c0, rng.gen_range(-2i64..=2)], m);
                    for k in 0..r {
                        out.matrix[i][k] = out.matrix[i][k].mul(&u).expect("same ring");
                    }
                }
            }
        }
        out
    }
}

/// Determinant in `F_p[T]` by fraction-free elimination.
fn fp_poly_determinant(mut a: Vec<Vec<Vec<u64>>>, p: u64) -> Vec<u64> {
    let n = a.len();
    let mut sign_flip = false;
    let mut prev = vec![1u64];
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !fp_is_zero(&a[i][k])) else {
            return vec![0];
        };
        if piv != k {
            a.swap(piv, k);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = fp_sub(&fp_mul(&a[i][j], &a[k][k], p), &fp_mul(&a[i][k], &a[k][j], p), p);
                a[i][j] = fp_divrem(&num, &prev, p).0;
            }
            a[i][k] = vec![0];
        }
        prev = a[k][k].clone();
    }
    let det = fp_trim(a[n - 1][n - 1].clone());
    if sign_flip {
        fp_sub(&[0], &det, p)
    } else {
        det
    }
}

/// Full rank of a matrix over `F_p[[T]]` known modulo `T^m`, by elimination
/// with pivots of least `T`-valuation. `None` when a column is invisible.
fn fp_series_rank_is_full(mut a: Vec<Vec<Vec<u64>>>, p: u64, m: usize) -> Option<bool> {
    let n = a.len();
    let val = |s: &[u64], known: usize| s.iter().take(known).position(|&c| c != 0);
    let known = m;
    for k in 0..n {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in k..n {
            for j in k..n {
                if let Some(v) = val(&a[i][j], known) {
                    if best.is_none_or(|b| v < b.2) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let (pi, pj, v) = best?;
        a.swap(pi, k);
        for row in a.iter_mut() {
            row.swap(pj, k);
        }
        // pivot = T^v u with u a unit; inverse of u modulo T^(known - v)
        let len = known - v;
        let u: Vec<u64> = a[k][k][v..known].to_vec();
        let mut inv = vec![0u64; len];
        let u0 = crate::cyclotomic::fp_inv(u[0], p);
        inv[0] = u0;
        for t in 1..len {
            let mut s = 0u64;
            for i in 1..=t {
                s = (s + u[i] * inv[t - i]) % p;
            }
            inv[t] = (p - s) % p * u0 % p;
        }
        for i in k + 1..n {
            // every entry of the pivot's row and column has valuation >= v
            let f: Vec<u64> = a[i][k][v..known].to_vec();
            let mut q = vec![0u64; len];
            for (x, &fx) in f.iter().enumerate() {
                for (y, &iy) in inv.iter().enumerate().take(len - x) {
                    q[x + y] = (q[x + y] + fx * iy) % p;
                }
            }
            for j in k..n {
                let prod = fp_mul(&q, &a[k][j], p);
                let mut row = a[i][j].clone();
                for (t, c) in prod.iter().enumerate().take(known) {
                    row[t] = (row[t] + p - c) % p;
                }
                a[i][j] = row;
            }
        }
    }
    Some(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ctx() -> PadicContext {
        PadicContext::two_adic()
    }

    fn s(c: &[i64]) -> IwasawaSeries {
        IwasawaSeries::from_i64s(&ctx(), c, 24)
    }

    fn ints(v: &[i64]) -> Vec<PadicInt> {
        v.iter().map(|&x| ctx().from_i64(x)).collect()
    }

    #[test]
    fn elementary_examples() {
        let c = ctx();
        let m = PresentedModule::elementary(&c, &[s(&[0, 1])], true).unwrap();
        assert_eq!(m.char_ideal().unwrap(), CharIdeal { mu: 0, poly: ints(&[0, 1]) });
        let m = PresentedModule::elementary(&c, &[s(&[2]), s(&[0, 1])], true).unwrap();
        assert!(m.char_ideal().unwrap().agrees_with(&CharIdeal { mu: 1, poly: ints(&[0, 1]) }));
        let m = PresentedModule::elementary(&c, &[], true).unwrap();
        assert_eq!(m.char_ideal().unwrap(), CharIdeal::unit(&c));
        assert!(matches!(PresentedModule::elementary(&c, &[s(&[0])], true), Err(Error::ZeroDivisor)));
    }

    #[test]
    fn char_ideal_examples() {
        let c = ctx();
        let m = PresentedModule::elementary(&c, &[s(&[0, 1]), s(&[2, 1])], true).unwrap();
        assert_eq!(m.char_ideal().unwrap(), CharIdeal { mu: 0, poly: ints(&[0, 2, 1]) });
        let m = PresentedModule::new(&c, vec![vec![s(&[0, 1]), s(&[1])], vec![s(&[0]), s(&[2])]], true).unwrap();
        assert!(m.char_ideal().unwrap().agrees_with(&CharIdeal { mu: 1, poly: ints(&[0, 1]) }));
        let z = PresentedModule::new(&c, vec![vec![s(&[0, 1]), s(&[0, 1])], vec![s(&[0, 2]), s(&[0, 2])]], true).unwrap();
        assert!(matches!(z.char_ideal(), Err(Error::NotTorsion)));
        assert!(PresentedModule::new(&c, vec![vec![s(&[1]), s(&[1])]], true).is_err());
    }

    #[test]
    fn scrambling_keeps_the_ideal() {
        let c = ctx();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = PresentedModule::elementary(&c, &[s(&[2, 0, 1]), s(&[3])], true).unwrap();
        let want = m.char_ideal().unwrap();
        assert_eq!(want, CharIdeal { mu: 0, poly: ints(&[2, 0, 1]) });
        for _ in 0..5 {
            let sc = m.scramble(&mut rng, 12);
            assert_ne!(sc.matrix(), m.matrix());
            assert_eq!(sc.char_ideal().unwrap(), want);
            let series_mode = PresentedModule { polynomial: false, ..sc.clone() };
            let got = series_mode.char_ideal().unwrap();
            assert!(got.agrees_with(&want));
            let digits = got.poly.iter().map(|c| c.precision()).min().unwrap();
            assert!(digits >= 8, "series-mode precision {digits}");
        }
    }

    #[test]
    fn extensions_multiply() {
        let c = ctx();
        let a = PresentedModule::elementary(&c, &[s(&[0, 1])], true).unwrap();
        let cc = PresentedModule::elementary(&c, &[s(&[2, 1])], true).unwrap();
        let zero = PresentedModule::ses_compose(&a, &cc, &[vec![s(&[0])]]).unwrap();
        assert_eq!(zero.char_ideal().unwrap(), CharIdeal { mu: 0, poly: ints(&[0, 2, 1]) });
        let glued = PresentedModule::ses_compose(&a, &cc, &[vec![s(&[5, -1, 3])]]).unwrap();
        assert_eq!(glued.char_ideal().unwrap(), CharIdeal { mu: 0, poly: ints(&[0, 2, 1]) });
        assert!(PresentedModule::ses_compose(&a, &cc, &[]).is_err());
    }

    #[test]
    fn mu_and_finite_generation() {
        let c = ctx();
        for (gs, fg) in [(vec![s(&[0, 1])], true), (vec![s(&[2])], false), (vec![s(&[0, 2])], false), (vec![s(&[2, 1]), s(&[1, 0, 1])], true)] {
            let m = PresentedModule::elementary(&c, &gs, true).unwrap();
            assert_eq!(m.is_mu_zero().unwrap(), fg);
            assert_eq!(m.is_finitely_generated_over_zp().unwrap(), fg);
        }
        let series = PresentedModule::elementary(&c, &[s(&[2, 1]), s(&[4, 6, 1])], false).unwrap();
        assert!(series.is_finitely_generated_over_zp().unwrap());
        let series = PresentedModule::elementary(&c, &[s(&[2])], false).unwrap();
        assert!(matches!(series.is_finitely_generated_over_zp(), Err(Error::Indeterminate(_))));
    }
}
