//! Submodules of `(Z/p^l)^n` in Howell form, and an integer Hermite
//! reduction used to cross-check membership decisions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A submodule of `(Z/p^l)^n`, kept in Howell form: echelon rows whose
/// pivots are powers of `p`, closed under multiplying a row by the power of
/// `p` that kills its pivot. Reduction against it is canonical.
#[derive(Debug, Clone)]
pub struct HowellModule {
    p: u64,
    l: u32,
    modulus: u64,
    n: usize,
    /// Sparse row with pivot at each column, if any, as sorted
    /// `(column, entry)` pairs; the first pair is the pivot `p^v`.
    rows: Vec<Option<SparseRow>>,
}

type SparseRow = Vec<(usize, u64)>;

fn val(x: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut x = x;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

fn inv_mod(a: u64, m: u64) -> u64 {
    let e = (a as i128).extended_gcd(&(m as i128));
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m as i128) as u64
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// `row - f piv` modulo `m`, zeros dropped.
fn sub_multiple(row: &[(usize, u64)], f: u64, piv: &[(usize, u64)], m: u64) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let (c, x) = match (row.get(i), piv.get(j)) {
            (Some(&(a, x)), Some(&(b, y))) if a == b => {
                i += 1;
                j += 1;
                (a, (x + m - mul_mod(f, y, m)) % m)
            }
            (Some(&(a, x)), Some(&(b, _))) if a < b => {
                i += 1;
                (a, x)
            }
            (Some(&(a, x)), None) => {
                i += 1;
                (a, x)
            }
            (_, Some(&(b, y))) => {
                j += 1;
                (b, (m - mul_mod(f, y, m)) % m)
            }
            (None, None) => unreachable!(),
        };
        if x != 0 {
            out.push((c, x));
        }
    }
    out
}

impl HowellModule {
    /// The zero submodule of `(Z/p^l)^n`.
    pub fn new(p: u64, l: u32, n: usize) -> Self {
        HowellModule { p, l, modulus: p.pow(l), n, rows: vec![None; n] }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of elements of the submodule, as a power of `p`.
    pub fn log_order(&self) -> u32 {
        self.rows.iter().flatten().map(|r| self.l - val(r[0].1, self.p)).sum()
    }

    fn normalize(&self, v: &[i64]) -> Vec<u64> {
        let m = self.modulus as i64;
        v.iter().map(|x| x.rem_euclid(m) as u64).collect()
    }

    /// Adds the span of `v`.
    pub fn insert(&mut self, v: &[i64]) {
        let row = self.normalize(v).into_iter().enumerate().filter(|&(_, x)| x != 0).collect();
        self.insert_reduced(row);
    }

    /// Adds the span of the vector with the given `(column, entry)` pairs;
    /// repeated columns are summed.
    pub fn insert_sparse(&mut self, v: &[(usize, i64)]) {
        let m = self.modulus as i64;
        let mut entries: Vec<(usize, i64)> = v.to_vec();
        entries.sort_unstable_by_key(|e| e.0);
        let mut row: SparseRow = Vec::with_capacity(entries.len());
        for (c, x) in entries {
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 = ((last.1 as i64 + x).rem_euclid(m)) as u64,
                _ => row.push((c, x.rem_euclid(m) as u64)),
            }
        }
        row.retain(|e| e.1 != 0);
        self.insert_reduced(row);
    }

    fn insert_reduced(&mut self, v: SparseRow) {
        let (p, m) = (self.p, self.modulus);
        let mut pending = vec![v];
        while let Some(mut row) = pending.pop() {
            while let Some(&(c, a)) = row.first() {
                let va = val(a, p);
                match &self.rows[c] {
                    Some(piv) => {
                        let vp = val(piv[0].1, p);
                        if va >= vp {
                            let f = a / p.pow(vp);
                            row = sub_multiple(&row, f, piv, m);
                        } else {
                            let old = self.rows[c].take().expect("pivot");
                            self.place(c, row);
                            pending.push(old);
                            break;
                        }
                    }
                    None => {
                        self.place(c, row);
                        break;
                    }
                }
            }
        }
    }

    /// Installs `row` as the pivot row at `c`, scaled so the pivot is a
    /// power of `p`, and queues its saturation.
    fn place(&mut self, c: usize, mut row: SparseRow) {
        let (p, m) = (self.p, self.modulus);
        let v = val(row[0].1, p);
        let u = inv_mod(row[0].1 / p.pow(v), m);
        for e in row.iter_mut() {
            e.1 = mul_mod(e.1, u, m);
        }
        let sat: SparseRow = if v > 0 {
            let k = p.pow(self.l - v);
            row.iter().map(|&(j, x)| (j, mul_mod(x, k, m))).filter(|e| e.1 != 0).collect()
        } else {
            Vec::new()
        };
        self.rows[c] = Some(row);
        if !sat.is_empty() {
            self.insert_reduced(sat);
        }
    }

    /// The canonical representative of `v` modulo the submodule.
    pub fn reduce(&self, v: &[i64]) -> Vec<u64> {
        let m = self.modulus;
        let mut row = self.normalize(v);
        for c in 0..self.n {
            if row[c] == 0 {
                continue;
            }
            if let Some(piv) = &self.rows[c] {
                let f = row[c] / piv[0].1;
                if f != 0 {
                    for &(j, y) in piv {
                        row[j] = (row[j] + m - mul_mod(f, y, m)) % m;
                    }
                }
            }
        }
        row
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}

/// Whether `v` lies in the integer lattice spanned by `rows` and
/// `modulus * Z^n`, decided by Hermite reduction over `Z` with exact
/// integers.
pub fn integer_membership(rows: &[Vec<i64>], modulus: i64, v: &[i64]) -> bool {
    let n = v.len();
    let mut basis: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = BigInt::from(modulus);
        basis.push(e);
    }
    let hnf = hermite(basis, n);
    let mut w: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
    for row in &hnf {
        let Some(c) = row.iter().position(|x| !x.is_zero()) else { continue };
        if w[..c].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, r) = w[c].div_mod_floor(&row[c]);
        if !r.is_zero() {
            return false;
        }
        for j in c..n {
            w[j] -= &q * &row[j];
        }
    }
    w.iter().all(|x| x.is_zero())
}

/// Row-style Hermite form by repeated gcd steps; zero rows dropped.
fn hermite(mut rows: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    for c in 0..n {
        let mut with: Vec<Vec<BigInt>> = Vec::new();
        let mut without: Vec<Vec<BigInt>> = Vec::new();
        for r in rows {
            if r[c].is_zero() {
                without.push(r);
            } else {
                with.push(r);
            }
        }
        while with.len() > 1 {
            with.sort_by(|a, b| a[c].abs().cmp(&b[c].abs()));
            let piv = with[0].clone();
            let mut next = vec![piv.clone()];
            for mut r in with.into_iter().skip(1) {
                let q = r[c].div_floor(&piv[c]);
                for j in c..n {
                    let t = &q * &piv[j];
                    r[j] -= t;
                }
                if r[c].is_zero() {
                    without.push(r);
                } else {
                    next.push(r);
                }
            }
            with = next;
        }
        if let Some(mut piv) = with.pop() {
            if piv[c].is_negative() {
                for x in piv.iter_mut() {
                    *x = -x.clone();
                }
            }
            out.push(piv);
        }
        rows = without;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn saturation() {
        // over Z/8, the span of (2, 1) contains (0, 4)
        let mut h = HowellModule::new(2, 3, 2);
        h.insert(&[2, 1]);
        assert!(h.contains(&[0, 4]));
        assert!(!h.contains(&[0, 2]));
        assert!(h.contains(&[4, 2]));
        assert_eq!(h.log_order(), 3);
    }

    #[test]
    fn agrees_with_integer_hermite() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.gen_range(1..6);
            let k = rng.gen_range(0..5);
            let rows: Vec<Vec<i64>> = (0..k).map(|_| (0..n).map(|_| rng.gen_range(-9..10)).collect()).collect();
            let mut h = HowellModule::new(2, 4, n);
            for r in &rows {
                h.insert(r);
            }
            for _ in 0..10 {
                let mut v: Vec<i64> = (0..n).map(|_| rng.gen_range(-20..20)).collect();
                if rng.gen_bool(0.5) && !rows.is_empty() {
                    let r = &rows[rng.gen_range(0..rows.len())];
                    let c = rng.gen_range(-3..4);
                    v = r.iter().map(|x| x * c + 16 * rng.gen_range(-2..3)).collect();
                }
                assert_eq!(h.contains(&v), integer_membership(&rows, 16, &v), "{rows:?} {v:?}");
            }
        }
    }

    #[test]
    fn canonical_reduction() {
        let mut h = HowellModule::new(2, 3, 3);
        h.insert(&[1, 2, 3]);
        h.insert(&[0, 4, 6]);
        let v = [5, 1, 7];
        let shifted: Vec<i64> = v.iter().zip([3, 6, 9]).map(|(a, b)| a + b).collect();
        assert_eq!(h.reduce(&v), h.reduce(&shifted));
        let shifted: Vec<i64> = v.iter().zip([0, 12, 18]).map(|(a, b)| a + b).collect();
        assert_eq!(h.reduce(&v), h.reduce(&shifted));
        assert_ne!(h.reduce(&v), h.reduce(&[5, 1, 6]));
    }
}
