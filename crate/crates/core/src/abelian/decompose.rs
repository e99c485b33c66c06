//! Decomposition of finite abelian black-box groups into cyclic factors.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;

use super::arith::{crt_idempotent, ext_gcd};
use super::local::{local_smith, Ring};
use super::order::OrderFinder;
use super::AbelianError;
use crate::group::oracle::{multi_pow, pow_u, HandleMap};
use crate::group::{GroupOracle, Handle, ProductOracle};
use crate::par;

/// Largest table built by a single discrete-log meet-in-the-middle step.
const DLOG_TABLE_MAX: u128 = 1 << 22;

/// `G ≅ Z_{d₁} × … × Z_{d_m}` with `d₁ | … | d_m`, a basis realizing it and
/// change-of-basis data relative to the generators it was built from.
pub struct AbelianDecomposition {
    oracle: Arc<dyn GroupOracle>,
    invariants: Vec<u64>,
    basis: Vec<Handle>,
    generators: Vec<Handle>,
    from_gens: Vec<Vec<u64>>,
    to_basis: Vec<Vec<u64>>,
    exponent: u128,
    primes: Vec<Primary>,
    // invariant index → (prime index, primary index) pairs
    slots: Vec<Vec<(usize, usize)>>,
    engine: Engine,
}

struct Primary {
    p: u64,
    exps: Vec<u32>,
    basis: Vec<Handle>,
    coeffs: Vec<Vec<u128>>,
    idempotent: u128,
    kind: PrimaryKind,
}

enum PrimaryKind {
    Generic { socle: Vec<Handle> },
    Ambient { factor_prime: usize, ring: Ring, u: Vec<Vec<u128>>, vals: Vec<u32> },
}

enum Engine {
    Generic,
    Product { product: ProductOracle, factor: Box<AbelianDecomposition>, cache: Mutex<HashMap<Handle, Vec<Vec<u128>>>> },
}

impl fmt::Debug for AbelianDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AbelianDecomposition").field("invariants", &self.invariants).finish()
    }
}

/// Decomposes the subgroup generated by `gens`. The generators must commute.
pub fn decompose_abelian(gens: &[Handle], oracle: Arc<dyn GroupOracle>) -> Result<AbelianDecomposition, AbelianError> {
    if let Some(product) = oracle.as_product() {
        let product = product.clone();
        return build_product(gens, oracle, product);
    }
    check_commuting(oracle.as_ref(), gens)?;
    build_generic(gens, oracle)
}

fn check_commuting(o: &dyn GroupOracle, gens: &[Handle]) -> Result<(), AbelianError> {
    let bad = par::find_first(gens.len(), |i| {
        (i + 1..gens.len())
            .find(|&j| !o.equal(&o.compose(&gens[i], &gens[j]), &o.compose(&gens[j], &gens[i])))
            .map(|j| (i, j))
    });
    match bad {
        Some((i, j)) => Err(AbelianError::NotAbelian { i, j }),
        None => Ok(()),
    }
}

/// Splits each generator `g` of order `r = ∏ p^j` into the parts
/// `g^{r/p^j}`, bucketed by prime.
pub fn p_primary_split(gens: &[Handle], oracle: &dyn GroupOracle) -> Result<BTreeMap<u64, Vec<Handle>>, AbelianError> {
    let mut finder = OrderFinder::new(oracle, oracle.order_bound());
    let mut out: BTreeMap<u64, Vec<Handle>> = BTreeMap::new();
    for g in gens {
        let r = finder.order(g)?;
        for (p, j) in super::arith::factorize(r).factors {
            let q = r / p.pow(j);
            out.entry(p).or_default().push(pow_u(oracle, g, q as u128));
        }
    }
    Ok(out)
}

fn build_generic(gens: &[Handle], oracle: Arc<dyn GroupOracle>) -> Result<AbelianDecomposition, AbelianError> {
    let o = oracle.as_ref();
    let mut finder = OrderFinder::new(o, o.order_bound());
    let orders = gens.iter().map(|g| finder.order(g)).collect::<Result<Vec<_>, _>>()?;
    let exponent = finder.exponent();
    let fact = finder.exponent_factorization().clone();
    let k = gens.len();
    let mut primes = Vec::new();
    for &(p, a_n) in &fact.factors {
        let idempotent = crt_idempotent((p as u128).pow(a_n), exponent);
        let mut part = Primary { p, exps: vec![], basis: vec![], coeffs: vec![], idempotent, kind: PrimaryKind::Generic { socle: vec![] } };
        for (j, g) in gens.iter().enumerate() {
            let r = orders[j] as u128;
            let mut a = 0u32;
            let mut pa = 1u128;
            while r % (pa * p as u128) == 0 {
                pa *= p as u128;
                a += 1;
            }
            if a == 0 {
                continue;
            }
            let q = r / pa;
            let mut coeff = vec![0u128; k];
            coeff[j] = q % exponent;
            part.insert(o, pow_u(o, g, q), a, coeff, exponent)?;
        }
        if !part.basis.is_empty() {
            primes.push(part);
        }
    }
    Ok(assemble(oracle, gens, exponent, primes, Engine::Generic))
}

impl Primary {
    fn socle(&self) -> &[Handle] {
        match &self.kind {
            PrimaryKind::Generic { socle } => socle,
            PrimaryKind::Ambient { .. } => unreachable!("ambient parts have no socle"),
        }
    }

    /// Adds `h` (of order `p^a`, coefficient vector `coeff`) to the span.
    fn insert(&mut self, o: &dyn GroupOracle, h: Handle, a: u32, coeff: Vec<u128>, n: u128) -> Result<(), AbelianError> {
        let p = self.p as u128;
        let (mut lo, mut hi) = (0u32, a);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.dlog(o, &pow_u(o, &h, p.pow(mid)))?.is_some() {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let t = lo;
        if t == 0 {
            return Ok(());
        }
        let c = self.dlog(o, &pow_u(o, &h, p.pow(t)))?.expect("member at the found level");
        let k = self.basis.len();
        let top = self.exps.first().copied().unwrap_or(0).max(a);
        let ring = Ring::new(self.p, top);
        let mut rel = vec![vec![0u128; k + 1]; k + 1];
        for i in 0..k {
            rel[i][i] = ring.red(p.pow(self.exps[i]));
            rel[i][k] = ring.sub(0, c[i]);
        }
        rel[k][k] = ring.red(p.pow(t));
        let ls = local_smith(&rel, k + 1, k + 1, ring);
        let mut olds = std::mem::take(&mut self.basis);
        olds.push(h);
        let mut old_coeffs = std::mem::take(&mut self.coeffs);
        old_coeffs.push(coeff);
        let mut fresh: Vec<(u32, Handle, Vec<u128>)> = Vec::new();
        for i in 0..=k {
            let v = ls.vals[i];
            if v == 0 {
                continue;
            }
            let col: Vec<u128> = (0..=k).map(|j| ls.u_inv[j][i]).collect();
            let handle = multi_pow(o, &olds, &col);
            let mut cf = vec![0u128; old_coeffs[0].len()];
            for (j, &w) in col.iter().enumerate() {
                if w == 0 {
                    continue;
                }
                for (x, &y) in cf.iter_mut().zip(&old_coeffs[j]) {
                    *x = (*x + mulmod128(w, y, n)) % n;
                }
            }
            fresh.push((v, handle, cf));
        }
        fresh.sort_by(|x, y| y.0.cmp(&x.0));
        self.exps = fresh.iter().map(|f| f.0).collect();
        self.coeffs = fresh.iter().map(|f| f.2.clone()).collect();
        self.basis = fresh.into_iter().map(|f| f.1).collect();
        let socle = self.basis.iter().zip(&self.exps).map(|(b, &e)| pow_u(o, b, p.pow(e - 1))).collect();
        self.kind = PrimaryKind::Generic { socle };
        Ok(())
    }

    /// Coordinates of a `p`-element `x` over the basis (digit by digit
    /// through the socle), or `None` if `x` is outside the span.
    fn dlog(&self, o: &dyn GroupOracle, x: &Handle) -> Result<Option<Vec<u128>>, AbelianError> {
        if self.basis.is_empty() {
            return Ok(o.is_identity(x).then(Vec::new));
        }
        let p = self.p as u128;
        let top = self.exps[0];
        let k = self.basis.len();
        let mut c = vec![0u128; k];
        let socle = self.socle();
        for l in 0..top {
            let known = multi_pow(o, &self.basis, &c);
            let residual = o.compose(x, &o.invert(&known));
            let target = pow_u(o, &residual, p.pow(top - 1 - l));
            let active: Vec<usize> = (0..k).filter(|&i| self.exps[i] + l >= top).collect();
            let gens: Vec<Handle> = active.iter().map(|&i| socle[i].clone()).collect();
            let Some(digits) = elementary_dlog(o, &target, &gens, self.p)? else {
                return Ok(None);
            };
            for (&i, d) in active.iter().zip(digits) {
                c[i] += d as u128 * p.pow(self.exps[i] + l - top);
            }
        }
        let back = multi_pow(o, &self.basis, &c);
        Ok(o.equal(&back, x).then_some(c))
    }
}

fn mulmod128(a: u128, b: u128, n: u128) -> u128 {
    if n <= 1 << 64 {
        (a % n) * (b % n) % n
    } else {
        let (mut acc, mut a, mut b) = (0u128, a % n, b % n);
        while b > 0 {
            if b & 1 == 1 {
                acc = (acc + a) % n;
            }
            a = (a + a) % n;
            b >>= 1;
        }
        acc
    }
}

/// Solves `target = Σ dᵢ·gensᵢ` with `dᵢ ∈ [0, p)` where each generator has
/// order `p` and the generators are independent.
fn elementary_dlog(o: &dyn GroupOracle, target: &Handle, gens: &[Handle], p: u64) -> Result<Option<Vec<u64>>, AbelianError> {
    match gens.len() {
        0 => Ok(o.is_identity(target).then(Vec::new)),
        1 => {
            let m = ((p as f64).sqrt().ceil() as u64).max(1);
            let mut baby: HandleMap<'_, dyn GroupOracle, u64> = HandleMap::new(o);
            let mut x = o.identity();
            for j in 0..m {
                baby.insert(x.clone(), j);
                x = o.compose(&x, &gens[0]);
            }
            let step = o.invert(&x);
            let mut y = target.clone();
            for i in 0..=m {
                if let Some(j) = baby.get(&y) {
                    return Ok(Some(vec![(i * m + j) % p]));
                }
                y = o.compose(&y, &step);
            }
            Ok(None)
        }
        k => {
            let half = k / 2;
            let (left, right) = gens.split_at(half.max(1));
            let size = (p as u128).saturating_pow(left.len() as u32);
            if size > DLOG_TABLE_MAX || (p as u128).saturating_pow(right.len() as u32) > DLOG_TABLE_MAX * 16 {
                return Err(AbelianError::DlogTooLarge { p, rank: k });
            }
            let mut baby: HandleMap<'_, dyn GroupOracle, Vec<u64>> = HandleMap::new(o);
            for (h, ds) in combinations(o, left, p) {
                baby.insert(h, ds);
            }
            for (h, ds) in combinations(o, right, p) {
                let y = o.compose(target, &o.invert(&h));
                if let Some(mut l) = baby.get(&y) {
                    l.extend(ds);
                    return Ok(Some(l));
                }
            }
            Ok(None)
        }
    }
}

fn combinations(o: &dyn GroupOracle, gens: &[Handle], p: u64) -> Vec<(Handle, Vec<u64>)> {
    let mut out = vec![(o.identity(), Vec::new())];
    for g in gens {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for (h, ds) in out {
            let mut x = h;
            for d in 0..p {
                let mut e = ds.clone();
                e.push(d);
                next.push((x.clone(), e));
                x = o.compose(&x, g);
            }
        }
        out = next;
    }
    out
}

fn build_product(gens: &[Handle], oracle: Arc<dyn GroupOracle>, product: ProductOracle) -> Result<AbelianDecomposition, AbelianError> {
    let factor_oracle = product.factor().clone();
    let arity = product.arity();
    let mut extra: Vec<Handle> = Vec::new();
    let (factor, coords) = loop {
        let mut fgens = factor_oracle.generators();
        fgens.extend(extra.iter().cloned());
        let fd = decompose_abelian(&fgens, factor_oracle.clone())?;
        let results = par::map_slice(gens, |g| {
            product
                .split(g)
                .into_iter()
                .map(|c| fd.primary_coordinates(&c).map_err(|_| c))
                .collect::<Result<Vec<_>, Handle>>()
        });
        let missing: Vec<Handle> = results.iter().filter_map(|r| r.as_ref().err().cloned()).collect();
        if missing.is_empty() {
            let coords: Vec<Vec<Vec<Vec<u128>>>> = results.into_iter().map(|r| r.unwrap()).collect();
            break (fd, coords);
        }
        extra.extend(missing);
    };
    let exponent = factor.exponent;
    let k = gens.len();
    let mut primes = Vec::new();
    for (fi, fp) in factor.primes.iter().enumerate() {
        let r = fp.exps.len();
        let top = fp.exps[0];
        let ring = Ring::new(fp.p, top);
        let pp = fp.p as u128;
        let rows = arity * r;
        let mut x = vec![vec![0u128; k]; rows];
        for (j, gc) in coords.iter().enumerate() {
            for (pos, comp) in gc.iter().enumerate() {
                for t in 0..r {
                    x[pos * r + t][j] = ring.mul(comp[fi][t], pp.pow(top - fp.exps[t]));
                }
            }
        }
        let ls = local_smith(&x, rows, k, ring);
        let rank = ls.vals.iter().take(rows.min(k)).take_while(|&&v| v < top).count();
        if rank == 0 {
            continue;
        }
        let idempotent = fp.idempotent;
        let mut exps = Vec::with_capacity(rank);
        let mut basis = Vec::with_capacity(rank);
        let mut coeffs = Vec::with_capacity(rank);
        for i in 0..rank {
            exps.push(top - ls.vals[i]);
            coeffs.push((0..k).map(|j| mulmod128(ls.v[j][i], idempotent, exponent)).collect());
            // ambient vector of the new basis element, then rebuilt from the
            // factor's primary basis
            let parts: Vec<Handle> = (0..arity)
                .map(|pos| {
                    let exps_t: Vec<u128> = (0..r)
                        .map(|t| {
                            let row = &x[pos * r + t];
                            let a = (0..k).fold(0u128, |acc, j| ring.add(acc, ring.mul(row[j], ls.v[j][i])));
                            a / pp.pow(top - fp.exps[t])
                        })
                        .collect();
                    multi_pow(factor_oracle.as_ref(), &fp.basis, &exps_t)
                })
                .collect();
            basis.push(product.join(&parts));
        }
        primes.push(Primary {
            p: fp.p,
            exps,
            basis,
            coeffs,
            idempotent,
            kind: PrimaryKind::Ambient { factor_prime: fi, ring, u: ls.u, vals: ls.vals[..rank].to_vec() },
        });
    }
    let engine = Engine::Product { product, factor: Box::new(factor), cache: Mutex::new(HashMap::new()) };
    Ok(assemble(oracle, gens, exponent, primes, engine))
}

fn assemble(
    oracle: Arc<dyn GroupOracle>,
    gens: &[Handle],
    exponent: u128,
    primes: Vec<Primary>,
    engine: Engine,
) -> AbelianDecomposition {
    let o = oracle.as_ref();
    let m = primes.iter().map(|p| p.exps.len()).max().unwrap_or(0);
    let k = gens.len();
    let mut invariants = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut from_gens = Vec::with_capacity(m);
    let mut slots = Vec::with_capacity(m);
    // slot s takes the s-th largest primary factor of every prime
    for s in (0..m).rev() {
        let members: Vec<(usize, usize)> =
            primes.iter().enumerate().filter(|(_, p)| p.exps.len() > s).map(|(pi, _)| (pi, s)).collect();
        let d: u128 = members.iter().map(|&(pi, t)| (primes[pi].p as u128).pow(primes[pi].exps[t])).product();
        let parts: Vec<Handle> = members.iter().map(|&(pi, t)| primes[pi].basis[t].clone()).collect();
        let handle = parts.iter().skip(1).fold(parts[0].clone(), |acc, h| o.compose(&acc, h));
        let mut row = vec![0u128; k];
        for &(pi, t) in &members {
            for (x, &y) in row.iter_mut().zip(&primes[pi].coeffs[t]) {
                *x = (*x + y) % exponent.max(1);
            }
        }
        invariants.push(d as u64);
        basis.push(handle);
        from_gens.push(row.into_iter().map(|x| x as u64).collect());
        slots.push(members);
    }
    let mut dec = AbelianDecomposition {
        oracle,
        invariants,
        basis,
        generators: gens.to_vec(),
        from_gens,
        to_basis: Vec::new(),
        exponent,
        primes,
        slots,
        engine,
    };
    let to_basis = par::map_slice(gens, |g| dec.coordinates(g).expect("generators lie in the group"));
    dec.to_basis = to_basis;
    dec
}

impl AbelianDecomposition {
    pub fn oracle(&self) -> &Arc<dyn GroupOracle> {
        &self.oracle
    }

    /// `d₁ | d₂ | … | d_m`, each at least 2.
    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn basis(&self) -> &[Handle] {
        &self.basis
    }

    pub fn generators(&self) -> &[Handle] {
        &self.generators
    }

    /// Row `i` expresses basis element `i` as `∏ⱼ genⱼ^{row[j]}`.
    pub fn from_generators(&self) -> &[Vec<u64>] {
        &self.from_gens
    }

    /// Row `j` holds the coordinates of generator `j`.
    pub fn to_basis(&self) -> &[Vec<u64>] {
        &self.to_basis
    }

    /// The exponent of the group (lcm of element orders).
    pub fn exponent(&self) -> u128 {
        self.exponent
    }

    pub fn order(&self) -> BigUint {
        self.invariants.iter().fold(BigUint::from(1u32), |acc, &d| acc * d)
    }

    /// Coordinates of `x` over each prime's primary basis.
    fn primary_coordinates(&self, x: &Handle) -> Result<Vec<Vec<u128>>, AbelianError> {
        let o = self.oracle.as_ref();
        if o.is_identity(x) {
            return Ok(self.primes.iter().map(|p| vec![0; p.exps.len()]).collect());
        }
        match &self.engine {
            Engine::Generic => {
                if !o.is_identity(&pow_u(o, x, self.exponent)) {
                    return Err(AbelianError::NotInGroup);
                }
                self.primes
                    .iter()
                    .map(|p| p.dlog(o, &pow_u(o, x, p.idempotent))?.ok_or(AbelianError::NotInGroup))
                    .collect()
            }
            Engine::Product { product, factor, cache } => {
                let comps: Vec<Vec<Vec<u128>>> = product
                    .split(x)
                    .into_iter()
                    .map(|c| {
                        if o.unique_encoding() {
                            if let Some(v) = cache.lock().unwrap().get(&c) {
                                return Ok(v.clone());
                            }
                        }
                        let v = factor.primary_coordinates(&c)?;
                        if o.unique_encoding() {
                            cache.lock().unwrap().insert(c, v.clone());
                        }
                        Ok(v)
                    })
                    .collect::<Result<_, AbelianError>>()?;
                let mut out = Vec::with_capacity(self.primes.len());
                for prim in &self.primes {
                    let PrimaryKind::Ambient { factor_prime, ring, u, vals } = &prim.kind else { unreachable!() };
                    let fp = &factor.primes[*factor_prime];
                    let r = fp.exps.len();
                    let top = fp.exps[0];
                    let pp = fp.p as u128;
                    let ambient: Vec<u128> = comps
                        .iter()
                        .flat_map(|c| (0..r).map(move |t| ring.mul(c[*factor_prime][t], pp.pow(top - fp.exps[t]))))
                        .collect();
                    let w: Vec<u128> = u
                        .iter()
                        .map(|row| row.iter().zip(&ambient).fold(0u128, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b))))
                        .collect();
                    if w[vals.len()..].iter().any(|&z| z != 0) {
                        return Err(AbelianError::NotInGroup);
                    }
                    let mut c = Vec::with_capacity(vals.len());
                    for (i, &v) in vals.iter().enumerate() {
                        if ring.val(w[i]) < v {
                            return Err(AbelianError::NotInGroup);
                        }
                        c.push(ring.div_pow(w[i], v) % pp.pow(top - v));
                    }
                    out.push(c);
                }
                // primes of the factor missing from this subgroup must vanish
                for (fi, fp) in factor.primes.iter().enumerate() {
                    let used = self.primes.iter().any(|p| matches!(p.kind, PrimaryKind::Ambient { factor_prime, .. } if factor_prime == fi));
                    if !used && comps.iter().any(|c| c[fi].iter().any(|&z| z % (fp.p as u128).pow(fp.exps[0]) != 0)) {
                        return Err(AbelianError::NotInGroup);
                    }
                }
                Ok(out)
            }
        }
    }

    /// The unique `(x₁, …, x_m)` with `xᵢ ∈ [0, dᵢ)` and `∏ gᵢ^{xᵢ} = x`.
    pub fn coordinates(&self, x: &Handle) -> Result<Vec<u64>, AbelianError> {
        let prim = self.primary_coordinates(x)?;
        Ok(self
            .slots
            .iter()
            .zip(&self.invariants)
            .map(|(members, &d)| {
                let d = d as u128;
                members.iter().fold(0u128, |acc, &(pi, t)| {
                    let pt = (self.primes[pi].p as u128).pow(self.primes[pi].exps[t]);
                    (acc + mulmod128(prim[pi][t], crt_idempotent(pt, d), d)) % d
                }) as u64
            })
            .collect())
    }

    /// `∏ gᵢ^{xᵢ}`, reducing each coordinate mod `dᵢ`.
    pub fn element(&self, coords: &[i128]) -> Handle {
        assert_eq!(coords.len(), self.rank());
        let exps: Vec<u128> =
            coords.iter().zip(&self.invariants).map(|(&c, &d)| c.rem_euclid(d as i128) as u128).collect();
        multi_pow(self.oracle.as_ref(), &self.basis, &exps)
    }

    /// Some `x` with `x^d = a`, or `None` if there is none. Solvable iff
    /// `gcd(d, dᵢ)` divides the `i`-th coordinate of `a` for every `i`.
    pub fn has_dth_root(&self, a: &Handle, d: u64) -> Result<Option<Handle>, AbelianError> {
        assert!(d >= 1);
        let coords = self.coordinates(a)?;
        let mut root = Vec::with_capacity(coords.len());
        for (&x, &n) in coords.iter().zip(&self.invariants) {
            let g = num_integer::gcd(d, n);
            if x % g != 0 {
                return Ok(None);
            }
            let m = (n / g) as i128;
            let (_, inv, _) = ext_gcd(((d / g) as i128).rem_euclid(m), m);
            root.push(((x / g) as i128 * inv.rem_euclid(m)).rem_euclid(m));
        }
        Ok(Some(self.element(&root)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{wrap_as_oracle, EncodedOracle, GroupTable, UnitsOracle};

    fn table_dec(t: &GroupTable, seed: u64) -> (Arc<EncodedOracle>, AbelianDecomposition) {
        let o = Arc::new(wrap_as_oracle(t.clone(), seed));
        let gens = o.generators();
        let d = decompose_abelian(&gens, o.clone()).unwrap();
        (o, d)
    }

    #[test]
    fn examples() {
        let (_, d) = table_dec(&GroupTable::trivial(), 0);
        assert_eq!(d.rank(), 0);
        assert_eq!(d.order(), BigUint::from(1u32));
        let (_, d) = table_dec(&GroupTable::abelian(&[2, 2]), 0);
        assert_eq!(d.invariants(), &[2, 2]);
        let u15 = GroupTable::units_mod_n(15).unwrap();
        let (o, d) = table_dec(&u15, 3);
        assert_eq!(d.invariants(), &[2, 4]);
        let four = o.encode(u15.index_of_residue(4).unwrap());
        let two = o.encode(u15.index_of_residue(2).unwrap());
        let c = d.coordinates(&four).unwrap();
        assert_eq!(d.element(&c.iter().map(|&x| x as i128).collect::<Vec<_>>()), four);
        let r = d.has_dth_root(&four, 2).unwrap().unwrap();
        assert_eq!(o.compose(&r, &r), four);
        assert!(d.has_dth_root(&two, 2).unwrap().is_none());
        assert_eq!(d.has_dth_root(&two, 1).unwrap(), Some(two.clone()));
        assert_eq!(d.coordinates(&d.basis()[1]).unwrap(), vec![0, 1]);
    }

    #[test]
    fn split_examples() {
        let z6 = wrap_as_oracle(GroupTable::cyclic(6), 1);
        let split = p_primary_split(&[z6.encode(1)], &z6).unwrap();
        assert_eq!(split.keys().copied().collect::<Vec<_>>(), vec![2, 3]);
        assert!(p_primary_split(&[z6.identity()], &z6).unwrap().is_empty());
        let u15 = GroupTable::units_mod_n(15).unwrap();
        let o = wrap_as_oracle(u15.clone(), 1);
        let gens = [o.encode(u15.index_of_residue(2).unwrap()), o.encode(u15.index_of_residue(14).unwrap())];
        assert_eq!(p_primary_split(&gens, &o).unwrap().keys().copied().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn non_abelian_is_rejected() {
        let o = Arc::new(wrap_as_oracle(GroupTable::dihedral(3), 0));
        let gens = o.generators();
        assert!(matches!(decompose_abelian(&gens, o), Err(AbelianError::NotAbelian { .. })));
    }

    #[test]
    fn product_route_matches_generic() {
        let z4 = Arc::new(wrap_as_oracle(GroupTable::abelian(&[2, 4]), 7));
        let prod = Arc::new(ProductOracle::new(z4.clone(), 3));
        let mut rng = crate::seed::rng(4);
        let gens: Vec<Handle> = (0..4).map(|_| prod.sample(&mut rng)).collect();
        let d = decompose_abelian(&gens, prod.clone()).unwrap();
        let elems = crate::group::oracle::enumerate_subgroup(prod.as_ref(), &gens, 10_000).unwrap();
        assert_eq!(d.order(), BigUint::from(elems.len()));
        for (b, &n) in d.basis().iter().zip(d.invariants()) {
            assert_eq!(super::super::order::element_order(b, prod.as_ref(), 1 << 20).unwrap(), n);
        }
        for e in &elems {
            let c = d.coordinates(e).unwrap();
            assert_eq!(&d.element(&c.iter().map(|&x| x as i128).collect::<Vec<_>>()), e);
        }
        for (j, row) in d.to_basis().iter().enumerate() {
            assert_eq!(d.element(&row.iter().map(|&x| x as i128).collect::<Vec<_>>()), gens[j]);
        }
        for (i, row) in d.from_generators().iter().enumerate() {
            let exps: Vec<u128> = row.iter().map(|&x| x as u128).collect();
            assert_eq!(multi_pow(prod.as_ref(), &gens, &exps), d.basis()[i]);
        }
        let outside = prod.unit_vector(0, z4.encode(1));
        if elems.iter().all(|e| e != &outside) {
            assert!(matches!(d.coordinates(&outside), Err(AbelianError::NotInGroup)));
        }
    }

    #[test]
    fn units_oracle_structure() {
        // Z_{91}^* ≅ Z_6 × Z_12 → invariants [6, 12]
        let u = Arc::new(UnitsOracle::new(91, 2, 4).unwrap());
        let d = decompose_abelian(&u.generators(), u.clone()).unwrap();
        assert_eq!(d.invariants(), &[6, 12]);
    }
}
