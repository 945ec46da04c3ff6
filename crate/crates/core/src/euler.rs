//! Group-ring combinatorics of Kolyvagin derivatives, run on synthetic
//! finitely presented modules that satisfy the Euler system axioms by
//! construction.
//!
//! `G = G_{q_1} x ... x G_{q_s} x Delta` with each `G_q` cyclic of order
//! `M = 2^l`. The module `V` has one cyclic `Z[G]`-summand per squarefree
//! `r`, generated by `x_r` and already fixed by `G_q` for `q` not dividing
//! `r`; the norm relations `N_q x_{rq} = (F_q - 1) x_r` are imposed as rows
//! of the presentation.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::{Element, FiniteAbelianGroup};
use crate::lattice::HowellModule;

/// Largest number of `Z`-generators of `V` accepted, `|Delta| (1 + M)^s`.
pub const MAX_GENERATORS: usize = 20000;

/// A finitely supported function `G -> Z`, multiplied by convolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingElt {
    group: FiniteAbelianGroup,
    terms: BTreeMap<Element, i64>,
}

impl GroupRingElt {
    pub fn zero(group: &FiniteAbelianGroup) -> Self {
        GroupRingElt { group: group.clone(), terms: BTreeMap::new() }
    }

    pub fn one(group: &FiniteAbelianGroup) -> Self {
        Self::basis(group, &group.identity())
    }

    pub fn basis(group: &FiniteAbelianGroup, g: &[u64]) -> Self {
        Self::from_terms(group, [(g.to_vec(), 1)])
    }

    pub fn from_terms(group: &FiniteAbelianGroup, terms: impl IntoIterator<Item = (Element, i64)>) -> Self {
        let mut out = Self::zero(group);
        for (g, c) in terms {
            out.add_term(g, c);
        }
        out
    }

    fn add_term(&mut self, g: Element, c: i64) {
        let g = self.group.add(&g, &self.group.identity());
        let v = self.terms.get(&g).copied().unwrap_or(0) + c;
        if v == 0 {
            self.terms.remove(&g);
        } else {
            self.terms.insert(g, v);
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn terms(&self) -> &BTreeMap<Element, i64> {
        &self.terms
    }

    pub fn coeff(&self, g: &[u64]) -> i64 {
        self.terms.get(g).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (g, &c) in &other.terms {
            out.add_term(g.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::from_terms(&self.group, self.terms.iter().map(|(g, &x)| (g.clone(), x * c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.group);
        for (g, &a) in &self.terms {
            for (h, &b) in &other.terms {
                out.add_term(self.group.add(g, h), a * b);
            }
        }
        out
    }

    /// The image under `G -> 1`.
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Coefficients reduced into `[0, m)`.
    pub fn reduce_mod(&self, m: u64) -> Self {
        Self::from_terms(&self.group, self.terms.iter().map(|(g, &c)| (g.clone(), c.rem_euclid(m as i64))))
    }
}

impl fmt::Display for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, c)| {
                let exps: Vec<String> = g.iter().map(|x| x.to_string()).collect();
                format!("{c}[{}]", exps.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The group `G`, its auxiliary primes, chosen generators and Frobenius
/// elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeGroup {
    l: u32,
    primes: Vec<String>,
    delta: FiniteAbelianGroup,
    frobenius: Vec<Element>,
    generators: Vec<u64>,
    group: FiniteAbelianGroup,
}

impl DerivativeGroup {
    /// `frobenius[i]` is an element of `G` with trivial `G_{q_i}` and
    /// `Delta` components.
    pub fn new(l: u32, primes: Vec<String>, delta: FiniteAbelianGroup, frobenius: Vec<Vec<i64>>) -> Result<Self> {
        if !(1..=16).contains(&l) {
            return Err(Error::DomainError(format!("M = 2^{l} out of range")));
        }
        let s = primes.len();
        for (i, q) in primes.iter().enumerate() {
            if q.is_empty() || q == "1" || primes[..i].contains(q) {
                return Err(Error::DomainError(format!("bad prime label {q:?}")));
            }
        }
        if frobenius.len() != s {
            return Err(Error::DimensionMismatch(format!("{} Frobenius elements for {s} primes", frobenius.len())));
        }
        let m = 1u64 << l;
        let mut orders = vec![m; s];
        orders.extend(&delta.orders);
        let group = FiniteAbelianGroup::new(orders)?;
        let frobenius: Vec<Element> = frobenius.iter().map(|f| group.normalize(f)).collect::<Result<_>>()?;
        for (i, f) in frobenius.iter().enumerate() {
            if f[i] != 0 || f[s..].iter().any(|&x| x != 0) {
                return Err(Error::DomainError(format!(
                    "Frobenius at {} must have trivial own and Delta components",
                    primes[i]
                )));
            }
        }
        Ok(DerivativeGroup { l, primes, delta, frobenius, generators: vec![1; s], group })
    }

    /// Replaces each `tau_{q_i}` by `tau_{q_i}^{a_i}`, `a_i` odd.
    pub fn with_generators(&self, exps: &[u64]) -> Result<Self> {
        if exps.len() != self.s() || exps.iter().any(|a| a % 2 == 0) {
            return Err(Error::DomainError("generator exponents must be odd, one per prime".into()));
        }
        let m = self.modulus();
        Ok(DerivativeGroup { generators: exps.iter().map(|a| a % m).collect(), ..self.clone() })
    }

    pub fn modulus(&self) -> u64 {
        1 << self.l
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn s(&self) -> usize {
        self.primes.len()
    }

    pub fn primes(&self) -> &[String] {
        &self.primes
    }

    pub fn delta(&self) -> &FiniteAbelianGroup {
        &self.delta
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn frobenius(&self, i: usize) -> &[u64] {
        &self.frobenius[i]
    }

    pub fn prime_index(&self, q: &str) -> Result<usize> {
        self.primes.iter().position(|x| x == q).ok_or_else(|| Error::UnknownPrime(q.to_string()))
    }

    /// Reads a product of declared labels such as `q1q2`, `q1*q2` or `1`.
    pub fn parse_ideal(&self, text: &str) -> Result<Vec<usize>> {
        let mut rest: &str = text.trim();
        let mut out = Vec::new();
        if rest.is_empty() || rest == "1" || rest == "(1)" {
            return Ok(out);
        }
        while !rest.is_empty() {
            rest = rest.trim_start_matches(['*', ' ', ',', '.']);
            if rest.is_empty() {
                break;
            }
            let best = self
                .primes
                .iter()
                .enumerate()
                .filter(|(_, q)| rest.starts_with(q.as_str()))
                .max_by_key(|(_, q)| q.len());
            let Some((i, q)) = best else {
                return Err(Error::UnknownPrime(rest.to_string()));
            };
            out.push(i);
            rest = &rest[q.len()..];
        }
        self.check_squarefree(&out)?;
        Ok(out)
    }

    fn check_squarefree(&self, r: &[usize]) -> Result<()> {
        for (k, &i) in r.iter().enumerate() {
            if i >= self.s() {
                return Err(Error::UnknownPrime(format!("index {i}")));
            }
            if r[..k].contains(&i) {
                return Err(Error::NotSquarefree(format!("{} repeated", self.primes[i])));
            }
        }
        Ok(())
    }

    /// `tau_{q_i}` as an element of `G`.
    pub fn tau(&self, i: usize) -> Element {
        let mut g = self.group.identity();
        g[i] = self.generators[i];
        g
    }

    fn power_sum(&self, i: usize, weighted: bool) -> GroupRingElt {
        let tau = self.tau(i);
        let terms = (0..self.modulus()).map(|k| (self.group.scalar(k, &tau), if weighted { k as i64 } else { 1 }));
        GroupRingElt::from_terms(&self.group, terms)
    }

    /// `N_q = sum_i tau_q^i`.
    pub fn norm_element(&self, q: &str) -> Result<GroupRingElt> {
        Ok(self.power_sum(self.prime_index(q)?, false))
    }

    /// `D_q = sum_i i tau_q^i`.
    pub fn derivative_element(&self, q: &str) -> Result<GroupRingElt> {
        Ok(self.power_sum(self.prime_index(q)?, true))
    }

    /// `D_r`, the product of `D_q` over `q | r`.
    pub fn derivative_product(&self, r: &[usize]) -> Result<GroupRingElt> {
        self.check_squarefree(r)?;
        Ok(r.iter().fold(GroupRingElt::one(&self.group), |acc, &i| acc.mul(&self.power_sum(i, true))))
    }

    /// `(tau_q - 1) D_q = M - N_q`, compared exactly in `Z[G]`.
    pub fn telescope_check(&self, q: &str) -> Result<bool> {
        let i = self.prime_index(q)?;
        let one = GroupRingElt::one(&self.group);
        let lhs = GroupRingElt::basis(&self.group, &self.tau(i)).sub(&one).mul(&self.power_sum(i, true));
        let rhs = one.scale(self.modulus() as i64).sub(&self.power_sum(i, false));
        Ok(lhs == rhs)
    }
}

/// Position of one cyclic summand inside `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Block {
    primes: Vec<usize>,
    offset: usize,
    radices: Vec<u64>,
}

/// `V` presented over `Z`: generators `g x_r` and the norm relations.
#[derive(Debug, Clone)]
pub struct SyntheticEulerSystem {
    group: DerivativeGroup,
    blocks: Vec<Block>,
    n: usize,
    relations: Vec<Vec<(usize, i64)>>,
    base_relations: Vec<Vec<i64>>,
    corrupted: Option<usize>,
    lattice: HowellModule,
}

/// The class of an element of `V` in `V / (2^l V + relations)`, as the
/// canonical representative with entries in `[0, 2^l)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KolyvaginClass {
    pub modulus: u64,
    pub representative: Vec<u64>,
}

impl KolyvaginClass {
    pub fn is_zero(&self) -> bool {
        self.representative.iter().all(|&x| x == 0)
    }
}

fn mask_of(r: &[usize]) -> usize {
    r.iter().fold(0, |m, &i| m | (1 << i))
}

impl SyntheticEulerSystem {
    /// The system on `group` with `x_(1)` subject to the `Z[Delta]`-span of
    /// `base_relations` (vectors indexed by `Delta.elements()`). With
    /// `corrupt = Some(i)` the relation `N_q x_q = (F_q - 1) x_(1)` at
    /// `q = q_i` is replaced by `N_q x_q = F_q x_(1)`.
    pub fn new(group: DerivativeGroup, base_relations: Vec<Vec<i64>>, corrupt: Option<usize>) -> Result<Self> {
        let s = group.s();
        let m = group.modulus();
        let dsize = group.delta.order() as usize;
        if s > 8 {
            return Err(Error::DomainError("at most 8 auxiliary primes".into()));
        }
        if corrupt.is_some_and(|i| i >= s) {
            return Err(Error::UnknownPrime(format!("index {}", corrupt.unwrap_or(0))));
        }
        if base_relations.iter().any(|b| b.len() != dsize) {
            return Err(Error::DimensionMismatch(format!("base relations must have {dsize} entries")));
        }
        let mut blocks = Vec::with_capacity(1 << s);
        let mut offset = 0usize;
        for mask in 0usize..1 << s {
            let primes: Vec<usize> = (0..s).filter(|i| mask & (1 << i) != 0).collect();
            let mut radices = vec![m; primes.len()];
            radices.extend(&group.delta.orders);
            let size = radices.iter().try_fold(1usize, |a, &d| a.checked_mul(d as usize));
            let Some(size) = size.filter(|&z| offset + z <= MAX_GENERATORS) else {
                return Err(Error::DomainError(format!("presentation exceeds {MAX_GENERATORS} generators")));
            };
            blocks.push(Block { primes, offset, radices });
            offset += size;
        }
        let mut sys = SyntheticEulerSystem {
            lattice: HowellModule::new(2, group.l, offset),
            group,
            blocks,
            n: offset,
            relations: Vec::new(),
            base_relations,
            corrupted: corrupt,
        };
        sys.relations = sys.build_relations();
        for row in &sys.relations {
            sys.lattice.insert_sparse(row);
        }
        Ok(sys)
    }

    /// A system with random `Delta`, random Frobenius elements and random
    /// relations on `x_(1)`, shrinking `Delta` if the size cap demands it.
    pub fn random(seed: u64, s: usize, l: u32) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shapes: [&[u64]; 5] = [&[], &[2], &[3], &[2, 2], &[4]];
        let mut delta = shapes[rng.gen_range(0..shapes.len())].to_vec();
        let m = 1u64 << l;
        let fits = |d: &[u64]| {
            let base: u64 = d.iter().product();
            (1 + m).checked_pow(s as u32).and_then(|x| x.checked_mul(base)).is_some_and(|x| x as usize <= MAX_GENERATORS)
        };
        if !fits(&delta) {
            delta.clear();
        }
        let frob: Vec<Vec<i64>> = (0..s)
            .map(|i| {
                let mut f = vec![0i64; s + delta.len()];
                for (j, x) in f.iter_mut().enumerate().take(s) {
                    if j != i {
                        *x = rng.gen_range(0..m as i64);
                    }
                }
                f
            })
            .collect();
        let primes = (1..=s).map(|i| format!("q{i}")).collect();
        let delta = FiniteAbelianGroup::new(delta)?;
        let dsize = delta.order() as usize;
        let group = DerivativeGroup::new(l, primes, delta, frob)?;
        let count = rng.gen_range(0..=2);
        let base = (0..count).map(|_| (0..dsize).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        Self::new(group, base, None)
    }

    pub fn group(&self) -> &DerivativeGroup {
        &self.group
    }

    pub fn corrupted(&self) -> Option<usize> {
        self.corrupted
    }

    pub fn base_relations(&self) -> &[Vec<i64>] {
        &self.base_relations
    }

    /// Number of `Z`-generators of the presentation.
    pub fn generator_count(&self) -> usize {
        self.n
    }

    /// The relation rows, dense.
    pub fn relations(&self) -> Vec<Vec<i64>> {
        self.relations.iter().map(|r| self.densify(r)).collect()
    }

    fn densify(&self, row: &[(usize, i64)]) -> Vec<i64> {
        let mut out = vec![0i64; self.n];
        for &(j, c) in row {
            out[j] += c;
        }
        out
    }

    /// Index of the generator `g x_r`, `r` given by its bitmask; components
    /// of `g` outside `r` act trivially.
    fn index(&self, mask: usize, g: &[u64]) -> usize {
        let b = &self.blocks[mask];
        let s = self.group.s();
        let coords = b.primes.iter().map(|&i| g[i]).chain(g[s..].iter().copied());
        let mut idx = 0usize;
        for (c, &d) in coords.zip(&b.radices) {
            idx = idx * d as usize + (c % d) as usize;
        }
        b.offset + idx
    }

    fn decode(&self, idx: usize) -> (usize, Element) {
        let mask = self.blocks.iter().rposition(|b| b.offset <= idx).expect("index in range");
        let b = &self.blocks[mask];
        let s = self.group.s();
        let mut local = idx - b.offset;
        let mut coords = vec![0u64; b.radices.len()];
        for (k, &d) in b.radices.iter().enumerate().rev() {
            coords[k] = (local % d as usize) as u64;
            local /= d as usize;
        }
        let mut g = self.group.group.identity();
        for (k, &i) in b.primes.iter().enumerate() {
            g[i] = coords[k];
        }
        g[s..].copy_from_slice(&coords[b.primes.len()..]);
        (mask, g)
    }

    fn build_relations(&self) -> Vec<Vec<(usize, i64)>> {
        let dg = &self.group;
        let s = dg.s();
        let g_all = &dg.group;
        let mut rows = Vec::new();
        let delta_elems = dg.delta.elements();
        for b in &self.base_relations {
            for d in &delta_elems {
                let row = delta_elems
                    .iter()
                    .zip(b)
                    .filter(|(_, &c)| c != 0)
                    .map(|(e, &c)| {
                        let mut g = g_all.identity();
                        g[s..].copy_from_slice(&dg.delta.add(d, e));
                        (self.index(0, &g), c)
                    })
                    .collect();
                rows.push(row);
            }
        }
        for mask in 0usize..1 << s {
            for q in (0..s).filter(|q| mask & (1 << q) == 0) {
                let top = mask | (1 << q);
                let tau = dg.tau(q);
                let b = &self.blocks[top];
                let size: u64 = b.radices.iter().product();
                for local in 0..size as usize {
                    let (_, g) = self.decode(b.offset + local);
                    if g[q] != 0 {
                        continue;
                    }
                    let mut row: Vec<(usize, i64)> =
                        (0..dg.modulus()).map(|i| (self.index(top, &g_all.add(&g, &g_all.scalar(i, &tau))), 1)).collect();
                    row.push((self.index(mask, &g_all.add(&g, &dg.frobenius[q])), -1));
                    if !(self.corrupted == Some(q) && mask == 0) {
                        row.push((self.index(mask, &g), 1));
                    }
                    rows.push(row);
                }
            }
        }
        rows
    }

    /// `x_r` as an integer vector.
    pub fn x(&self, r: &[usize]) -> Result<Vec<i64>> {
        self.group.check_squarefree(r)?;
        let mut v = vec![0i64; self.n];
        v[self.index(mask_of(r), &self.group.group.identity())] = 1;
        Ok(v)
    }

    /// `alpha y` for `alpha` in `Z[G]`.
    pub fn act(&self, alpha: &GroupRingElt, y: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.n];
        for (j, &c) in y.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (mask, g) = self.decode(j);
            for (sigma, &a) in alpha.terms() {
                out[self.index(mask, &self.group.group.add(&g, sigma))] += a * c;
            }
        }
        out
    }

    /// `D_r x_r` as an integer vector.
    pub fn derivative_vector(&self, r: &[usize]) -> Result<Vec<i64>> {
        let d = self.group.derivative_product(r)?;
        Ok(self.act(&d, &self.x(r)?))
    }

    /// The canonical representative of `y` in `V / (2^l V + relations)`.
    pub fn class_of(&self, y: &[i64]) -> KolyvaginClass {
        KolyvaginClass { modulus: self.lattice.modulus(), representative: self.lattice.reduce(y) }
    }

    /// As `class_of`, modulo `2^k` for any `k`.
    pub fn class_of_mod(&self, y: &[i64], k: u32) -> KolyvaginClass {
        if k == self.group.l {
            return self.class_of(y);
        }
        let mut lattice = HowellModule::new(2, k, self.n);
        for row in &self.relations {
            lattice.insert_sparse(row);
        }
        KolyvaginClass { modulus: lattice.modulus(), representative: lattice.reduce(y) }
    }

    /// `kappa(r)`, the class of `D_r x_r` modulo `M V` and the relations.
    pub fn kolyvagin_derivative(&self, r: &[usize]) -> Result<KolyvaginClass> {
        Ok(self.class_of(&self.derivative_vector(r)?))
    }

    /// Whether `(tau_q - 1) D_r x_r` lies in `M V + relations` for every
    /// `q | r`.
    pub fn invariance_check(&self, r: &[usize]) -> Result<bool> {
        let y = self.derivative_vector(r)?;
        let g = &self.group.group;
        for &q in r {
            let t = GroupRingElt::basis(g, &self.group.tau(q)).sub(&GroupRingElt::one(g));
            if !self.lattice.contains(&self.act(&t, &y)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Local data at one auxiliary prime: images of the generators of `V` in
/// `I_q = Z[Delta] Q`, one column per element of `Delta`.
///
/// `valuation` gives `[y]_q`. On the kernel of `[.]_q` an element is an
/// `M`-th power times a local unit at every `Q | q`; `residue_log` gives
/// the discrete logarithms `l_Q` of that unit part on generators, which
/// `phi_q` sums.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalDatum {
    pub prime: usize,
    pub valuation: Vec<Vec<i64>>,
    pub residue_log: Vec<Vec<i64>>,
}

fn rotate(v: &[i64], delta: &FiniteAbelianGroup, by: &[u64]) -> Vec<i64> {
    let elems = delta.elements();
    let pos = |e: &Element| elems.iter().position(|x| x == e).expect("element of Delta");
    let mut out = vec![0i64; v.len()];
    for (k, e) in elems.iter().enumerate() {
        out[pos(&delta.add(e, by))] = v[k];
    }
    out
}

impl LocalDatum {
    pub fn new(sys: &SyntheticEulerSystem, prime: usize, valuation: Vec<Vec<i64>>, residue_log: Vec<Vec<i64>>) -> Result<Self> {
        let d = sys.group.delta.order() as usize;
        if prime >= sys.group.s() {
            return Err(Error::UnknownPrime(format!("index {prime}")));
        }
        for mat in [&valuation, &residue_log] {
            if mat.len() != sys.n || mat.iter().any(|r| r.len() != d) {
                return Err(Error::DimensionMismatch(format!("local datum must be {} x {d}", sys.n)));
            }
        }
        Ok(LocalDatum { prime, valuation, residue_log })
    }

    /// A random `Delta`-equivariant datum whose valuations live only on
    /// the summands `x_r` with `q | r` and do not see `G_q`.
    pub fn supported_at(sys: &SyntheticEulerSystem, prime: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = sys.group.s();
        let delta = &sys.group.delta;
        let d = delta.order() as usize;
        let blocks = 1usize << s;
        let val_seed: Vec<Vec<i64>> = (0..blocks).map(|_| (0..d).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let log_seed: Vec<Vec<i64>> = (0..blocks).map(|_| (0..d).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let mut valuation = vec![vec![0i64; d]; sys.n];
        let mut residue_log = vec![vec![0i64; d]; sys.n];
        for j in 0..sys.n {
            let (mask, g) = sys.decode(j);
            if mask & (1 << prime) != 0 {
                valuation[j] = rotate(&val_seed[mask], delta, &g[s..]);
            }
            residue_log[j] = rotate(&log_seed[mask], delta, &g[s..]);
        }
        Self::new(sys, prime, valuation, residue_log)
    }

    /// Whether `[.]_q` kills every relation modulo `M`.
    pub fn is_well_defined(&self, sys: &SyntheticEulerSystem) -> bool {
        let m = sys.group.modulus() as i64;
        sys.relations().iter().all(|row| apply(&self.valuation, row).iter().all(|x| x.rem_euclid(m) == 0))
    }
}

fn apply(mat: &[Vec<i64>], y: &[i64]) -> Vec<i64> {
    let d = mat.first().map_or(0, |r| r.len());
    let mut out = vec![0i64; d];
    for (row, &c) in mat.iter().zip(y) {
        if c != 0 {
            for (o, &x) in out.iter_mut().zip(row) {
                *o += x * c;
            }
        }
    }
    out
}

fn check_datum(sys: &SyntheticEulerSystem, q: usize, y: &[i64], datum: &LocalDatum) -> Result<()> {
    if datum.prime != q {
        return Err(Error::UndefinedDatum(format!("no datum at {}", sys.group.primes.get(q).map_or("?", |s| s))));
    }
    if y.len() != sys.n {
        return Err(Error::DimensionMismatch(format!("element has {} entries, V has {} generators", y.len(), sys.n)));
    }
    Ok(())
}

/// `[y]_q` in `I_q / M I_q`.
pub fn bracket_q(sys: &SyntheticEulerSystem, q: usize, y: &[i64], datum: &LocalDatum) -> Result<Vec<u64>> {
    check_datum(sys, q, y, datum)?;
    let m = sys.group.modulus() as i64;
    Ok(apply(&datum.valuation, y).iter().map(|x| x.rem_euclid(m) as u64).collect())
}

/// `phi_q(w) = sum_Q l_Q(w) Q` in `I_q / M I_q`, for `w` with `[w]_q = 0`.
pub fn phi_q(sys: &SyntheticEulerSystem, q: usize, w: &[i64], datum: &LocalDatum) -> Result<Vec<u64>> {
    if bracket_q(sys, q, w, datum)?.iter().any(|&x| x != 0) {
        return Err(Error::DomainError("phi_q is defined on the kernel of [.]_q only".into()));
    }
    let m = sys.group.modulus() as i64;
    Ok(apply(&datum.residue_log, w).iter().map(|x| x.rem_euclid(m) as u64).collect())
}

/// A synthetic system as read from a scenario file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerScenario {
    #[serde(rename = "M")]
    pub m: u64,
    pub primes: Vec<String>,
    #[serde(default)]
    pub delta: Vec<u64>,
    /// One element of `G` per prime; random from `seed` when absent.
    #[serde(default)]
    pub frobenius: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub generators: Option<Vec<u64>>,
    #[serde(default)]
    pub seed: u64,
    /// Relations on `x_(1)`; random from `seed` when absent.
    #[serde(default)]
    pub base_relations: Option<Vec<Vec<i64>>>,
    /// Label of a prime whose norm relation is deliberately broken.
    #[serde(default)]
    pub corrupt: Option<String>,
}

impl EulerScenario {
    pub fn build(&self) -> Result<SyntheticEulerSystem> {
        if self.m < 2 || !self.m.is_power_of_two() {
            return Err(Error::DomainError(format!("M = {} is not a power of two", self.m)));
        }
        let l = self.m.trailing_zeros();
        let s = self.primes.len();
        let delta = FiniteAbelianGroup::new(self.delta.clone())?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let frob = match &self.frobenius {
            Some(f) => f.clone(),
            None => (0..s)
                .map(|i| {
                    let mut f = vec![0i64; s + self.delta.len()];
                    for (j, x) in f.iter_mut().enumerate().take(s) {
                        if j != i {
                            *x = rng.gen_range(0..self.m as i64);
                        }
                    }
                    f
                })
                .collect(),
        };
        let mut group = DerivativeGroup::new(l, self.primes.clone(), delta, frob)?;
        if let Some(a) = &self.generators {
            group = group.with_generators(a)?;
        }
        let dsize = group.delta.order() as usize;
        let base = match &self.base_relations {
            Some(b) => b.clone(),
            None => {
                let count = rng.gen_range(0..=2);
                (0..count).map(|_| (0..dsize).map(|_| rng.gen_range(-2..=2)).collect()).collect()
            }
        };
        let corrupt = self.corrupt.as_deref().map(|q| group.prime_index(q)).transpose()?;
        SyntheticEulerSystem::new(group, base, corrupt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::integer_membership;

    fn cyclic(l: u32, s: usize) -> DerivativeGroup {
        let primes = (1..=s).map(|i| format!("q{i}")).collect();
        DerivativeGroup::new(l, primes, FiniteAbelianGroup::trivial(), vec![vec![0; s]; s]).unwrap()
    }

    fn t(g: &DerivativeGroup, k: &[u64]) -> GroupRingElt {
        GroupRingElt::basis(g.group(), k)
    }

    #[test]
    fn norm_and_derivative_elements() {
        let g = cyclic(1, 1);
        let one = GroupRingElt::one(g.group());
        assert_eq!(g.norm_element("q1").unwrap(), one.add(&t(&g, &[1])));
        assert_eq!(g.derivative_element("q1").unwrap(), t(&g, &[1]));
        let g = cyclic(2, 1);
        let d = t(&g, &[1]).add(&t(&g, &[2]).scale(2)).add(&t(&g, &[3]).scale(3));
        assert_eq!(g.derivative_element("q1").unwrap(), d);
        for l in 1..=6 {
            let g = cyclic(l, 1);
            let m = g.modulus() as i64;
            assert_eq!(g.norm_element("q1").unwrap().augmentation(), m);
            assert_eq!(g.derivative_element("q1").unwrap().augmentation(), m * (m - 1) / 2);
            assert!(g.telescope_check("q1").unwrap());
        }
        assert!(matches!(g.norm_element("q9"), Err(Error::UnknownPrime(_))));
    }

    #[test]
    fn derivative_products() {
        let g = cyclic(1, 2);
        assert_eq!(g.derivative_product(&[]).unwrap(), GroupRingElt::one(g.group()));
        assert_eq!(g.derivative_product(&[0]).unwrap(), g.derivative_element("q1").unwrap());
        assert_eq!(g.derivative_product(&g.parse_ideal("q1q2").unwrap()).unwrap(), t(&g, &[1, 1]));
        assert!(matches!(g.parse_ideal("q1q1"), Err(Error::NotSquarefree(_))));
        assert!(matches!(g.derivative_product(&[1, 1]), Err(Error::NotSquarefree(_))));
        assert_eq!(g.parse_ideal("1").unwrap(), Vec::<usize>::new());
        assert_eq!(g.parse_ideal("q2*q1").unwrap(), vec![1, 0]);
        assert!(matches!(g.parse_ideal("q3"), Err(Error::UnknownPrime(_))));
    }

    #[test]
    fn frobenius_validation() {
        let p = vec!["a".to_string(), "b".to_string()];
        let d = FiniteAbelianGroup::new(vec![2]).unwrap();
        assert!(DerivativeGroup::new(2, p.clone(), d.clone(), vec![vec![0, 1, 0], vec![3, 0, 0]]).is_ok());
        assert!(DerivativeGroup::new(2, p.clone(), d.clone(), vec![vec![1, 1, 0], vec![3, 0, 0]]).is_err());
        assert!(DerivativeGroup::new(2, p, d, vec![vec![0, 1, 1], vec![3, 0, 0]]).is_err());
    }

    #[test]
    fn kappa_of_one_is_x1() {
        let sys = SyntheticEulerSystem::random(1, 2, 2).unwrap();
        let k = sys.kolyvagin_derivative(&[]).unwrap();
        assert_eq!(k, sys.class_of(&sys.x(&[]).unwrap()));
    }

    #[test]
    fn invariance_on_random_systems() {
        for seed in 0..6 {
            for (s, l) in [(1, 1), (1, 4), (2, 2), (2, 4), (3, 1), (3, 2)] {
                let sys = SyntheticEulerSystem::random(seed, s, l).unwrap();
                let ideals: Vec<Vec<usize>> = (0usize..1 << s).map(|m| (0..s).filter(|i| m & (1 << i) != 0).collect()).collect();
                for r in ideals {
                    assert!(sys.invariance_check(&r).unwrap(), "seed {seed} s {s} l {l} r {r:?}");
                }
            }
        }
    }

    #[test]
    fn largest_size() {
        let sys = SyntheticEulerSystem::random(0, 3, 4).unwrap();
        assert!(sys.invariance_check(&[0, 1, 2]).unwrap());
    }

    #[test]
    fn corrupted_system_fails() {
        for l in 1..=3 {
            let good = SyntheticEulerSystem::random(5, 2, l).unwrap();
            let bad = SyntheticEulerSystem::new(good.group().clone(), Vec::new(), Some(0)).unwrap();
            assert!(!bad.invariance_check(&[0]).unwrap(), "l = {l}");
            assert!(bad.invariance_check(&[1]).unwrap());
        }
    }

    #[test]
    fn classes_agree_with_integer_hermite() {
        for seed in 0..4 {
            let sys = SyntheticEulerSystem::random(seed, 1, 2).unwrap();
            let m = sys.group().modulus() as i64;
            let rows = sys.relations();
            let y = sys.derivative_vector(&[0]).unwrap();
            let k = sys.kolyvagin_derivative(&[0]).unwrap();
            let diff: Vec<i64> = y.iter().zip(&k.representative).map(|(a, &b)| a - b as i64).collect();
            assert!(integer_membership(&rows, m, &diff));
            let tau = GroupRingElt::basis(sys.group().group(), &sys.group().tau(0));
            let moved = sys.act(&tau.sub(&GroupRingElt::one(sys.group().group())), &y);
            assert!(integer_membership(&rows, m, &moved));
            let x = sys.x(&[0]).unwrap();
            assert_eq!(sys.class_of(&x).is_zero(), integer_membership(&rows, m, &x));
        }
    }

    #[test]
    fn doubling_the_modulus() {
        let sys = SyntheticEulerSystem::random(9, 2, 2).unwrap();
        for r in [vec![], vec![0], vec![1], vec![0, 1]] {
            let y = sys.derivative_vector(&r).unwrap();
            let fine = sys.class_of_mod(&y, 3);
            let lifted: Vec<i64> = fine.representative.iter().map(|&x| x as i64).collect();
            assert_eq!(sys.class_of(&lifted), sys.kolyvagin_derivative(&r).unwrap());
        }
    }

    #[test]
    fn changing_generators_scales_by_a_unit() {
        let sys = SyntheticEulerSystem::random(4, 2, 3).unwrap();
        let m = sys.group().modulus();
        for a in [[3u64, 1], [5, 7]] {
            let g2 = sys.group().with_generators(&a).unwrap();
            let other = SyntheticEulerSystem::new(g2, sys.base_relations().to_vec(), None).unwrap();
            for r in [vec![0], vec![1], vec![0, 1]] {
                let k = sys.kolyvagin_derivative(&r).unwrap();
                let k2 = other.kolyvagin_derivative(&r).unwrap();
                let inv = |x: u64| (1..m).find(|y| x * y % m == 1).expect("odd");
                let u = r.iter().map(|&i| inv(a[i])).fold(1, |x, y| x * y % m);
                let scaled: Vec<i64> = k.representative.iter().map(|&x| (x * u % m) as i64).collect();
                assert_eq!(sys.class_of(&scaled), k2, "a {a:?} r {r:?}");
            }
        }
    }

    #[test]
    fn brackets() {
        let sys = SyntheticEulerSystem::random(2, 2, 2).unwrap();
        let datum = LocalDatum::supported_at(&sys, 0, 11).unwrap();
        assert!(datum.is_well_defined(&sys));
        let zero = vec![0i64; sys.generator_count()];
        assert!(bracket_q(&sys, 0, &zero, &datum).unwrap().iter().all(|&x| x == 0));
        let y = sys.x(&[0]).unwrap();
        let z = sys.derivative_vector(&[0, 1]).unwrap();
        let sum: Vec<i64> = y.iter().zip(&z).map(|(a, b)| a + b).collect();
        let m = sys.group().modulus();
        let by = bracket_q(&sys, 0, &y, &datum).unwrap();
        let bz = bracket_q(&sys, 0, &z, &datum).unwrap();
        let bs: Vec<u64> = by.iter().zip(&bz).map(|(a, b)| (a + b) % m).collect();
        assert_eq!(bracket_q(&sys, 0, &sum, &datum).unwrap(), bs);
        for r in [vec![], vec![1]] {
            let k = sys.kolyvagin_derivative(&r).unwrap();
            let rep: Vec<i64> = k.representative.iter().map(|&x| x as i64).collect();
            assert!(bracket_q(&sys, 0, &rep, &datum).unwrap().iter().all(|&x| x == 0));
            assert!(phi_q(&sys, 0, &rep, &datum).is_ok());
        }
        assert!(matches!(bracket_q(&sys, 1, &y, &datum), Err(Error::UndefinedDatum(_))));
    }

    #[test]
    fn scenario_round_trip() {
        let text = r#"{"M": 4, "primes": ["q1", "q2"], "delta": [2], "seed": 3}"#;
        let sc: EulerScenario = serde_json::from_str(text).unwrap();
        let sys = sc.build().unwrap();
        assert_eq!(sys.generator_count(), 2 * 25);
        assert!(sys.invariance_check(&sys.group().parse_ideal("q1q2").unwrap()).unwrap());
        let bad = EulerScenario { corrupt: Some("q1".into()), base_relations: Some(vec![]), ..sc };
        assert!(!bad.build().unwrap().invariance_check(&[0]).unwrap());
    }
}
