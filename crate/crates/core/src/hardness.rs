//! Extensions built from factor sets, and quadratic-residuosity instances.
//!
//! A factor set `f` on `G` with values in `A` defines the group of pairs
//! `(a, x) ∈ A × G` with
//!
//! ```text
//! (a, x)(b, y) = (a + φ(x)b + f(x, y), xy)
//! ```
//!
//! whose kernel of `(a, x) ↦ x` is `A`. Over `G = Z₂` and `A = Z_N^*` with
//! `f(1, 1) = y` and `f(1, 1) = 1` the two extensions are equivalent
//! exactly when `y` is a square mod `N`.

use std::sync::Arc;

use rand::{Rng, RngCore};
use thiserror::Error;

use crate::abelian::arith::{jacobi, pow_mod};
use crate::abelian::Factorization;
use crate::cohomology::{cocycle_violation, Cochain2, OracleModule, TableModule};
use crate::group::Codec;
use crate::group::{
    ActionSpec, EncodedOracle, ExtensionInstance, ExtensionMaps, GroupError, GroupOracle, GroupTable, Handle,
    OracleAction, Quotient, TableExtension, TableOracleAction, UnitsOracle,
};
use crate::seed::derive;

/// Exhaustive residuosity checks refuse moduli above this.
pub const QR_EXHAUSTIVE_MAX: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HardnessError {
    #[error("factor set fails the cocycle identity at ({x}, {y}, {z})")]
    NotACocycle { x: usize, y: usize, z: usize },
    #[error("{y} is not a unit mod {n}")]
    NotAUnit { n: u64, y: u64 },
    #[error("factorization does not multiply to {n}")]
    BadFactorization { n: u64 },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The black-box group of pairs `(a, x)` defined by a factor set.
pub struct FactorSetExtension {
    kernel: Arc<dyn GroupOracle>,
    quotient: GroupTable,
    f: Cochain2<Handle>,
    action: Option<Arc<dyn OracleAction>>,
    codec: Codec,
    gens: Vec<Handle>,
}

impl FactorSetExtension {
    fn new(
        kernel: Arc<dyn GroupOracle>,
        quotient: GroupTable,
        f: Cochain2<Handle>,
        action: Option<Arc<dyn OracleAction>>,
        seed: u64,
    ) -> Self {
        let mut ext = FactorSetExtension { kernel, quotient, f, action, codec: Codec::new(seed), gens: Vec::new() };
        let zero = ext.kernel.identity();
        let mut gens: Vec<Handle> = ext.kernel.generators().into_iter().map(|a| ext.pair(&a, 0)).collect();
        gens.extend(ext.quotient.generating_set().into_iter().map(|x| ext.pair(&zero, x)));
        ext.gens = gens;
        ext
    }

    pub fn kernel(&self) -> &Arc<dyn GroupOracle> {
        &self.kernel
    }

    pub fn quotient(&self) -> &GroupTable {
        &self.quotient
    }

    pub fn factor_set(&self) -> &Cochain2<Handle> {
        &self.f
    }

    /// The handle of `(a, x)`.
    pub fn pair(&self, a: &Handle, x: usize) -> Handle {
        let bytes = a.as_bytes();
        assert!(bytes.len() <= 48, "kernel handles longer than 48 bytes are not supported");
        let mut words = vec![(x as u64) | ((bytes.len() as u64) << 48)];
        for chunk in bytes.chunks(8) {
            let mut w = [0u8; 8];
            w[..chunk.len()].copy_from_slice(chunk);
            words.push(u64::from_le_bytes(w));
        }
        if words.len() < 2 {
            words.push(0);
        }
        self.codec.seal(&words)
    }

    /// The `(a, x)` behind a handle.
    pub fn unpair(&self, h: &Handle) -> Option<(Handle, usize)> {
        let n = h.as_bytes().len() / 8;
        let words = self.codec.open(h, n)?;
        let len = (words[0] >> 48) as usize;
        let x = (words[0] & ((1 << 48) - 1)) as usize;
        if x >= self.quotient.order() || len.div_ceil(8).max(1) != n - 1 {
            return None;
        }
        let mut bytes = Vec::with_capacity(len);
        for w in &words[1..n] {
            bytes.extend_from_slice(&w.to_le_bytes());
        }
        bytes.truncate(len);
        Some((Handle::from_bytes(&bytes), x))
    }

    fn split(&self, h: &Handle) -> (Handle, usize) {
        self.unpair(h).expect("handle was not issued by this extension")
    }

    fn act(&self, x: usize, a: &Handle) -> Handle {
        match &self.action {
            Some(act) if x != 0 => act.act(x, a),
            _ => a.clone(),
        }
    }
}

impl GroupOracle for FactorSetExtension {
    fn compose(&self, p: &Handle, q: &Handle) -> Handle {
        let (a, x) = self.split(p);
        let (b, y) = self.split(q);
        let k = &self.kernel;
        let c = k.compose(&k.compose(&a, &self.act(x, &b)), self.f.get(x, y));
        self.pair(&c, self.quotient.mul(x, y))
    }

    fn invert(&self, p: &Handle) -> Handle {
        let (a, x) = self.split(p);
        let xi = self.quotient.inv(x);
        let k = &self.kernel;
        let c = k.invert(&k.compose(&a, self.f.get(x, xi)));
        self.pair(&self.act(xi, &c), xi)
    }

    fn is_identity(&self, p: &Handle) -> bool {
        let (a, x) = self.split(p);
        x == 0 && self.kernel.is_identity(&a)
    }

    fn identity(&self) -> Handle {
        self.pair(&self.kernel.identity(), 0)
    }

    fn generators(&self) -> Vec<Handle> {
        self.gens.clone()
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Handle {
        let a = self.kernel.sample(rng);
        let x = rng.gen_range(0..self.quotient.order());
        self.pair(&a, x)
    }

    fn order_bound(&self) -> u64 {
        self.kernel.order_bound().saturating_mul(self.quotient.order() as u64)
    }

    fn equal(&self, p: &Handle, q: &Handle) -> bool {
        let (a, x) = self.split(p);
        let (b, y) = self.split(q);
        x == y && self.kernel.equal(&a, &b)
    }

    fn unique_encoding(&self) -> bool {
        self.kernel.unique_encoding()
    }
}

struct PairMaps {
    ext: Arc<FactorSetExtension>,
    quotient: Arc<EncodedOracle>,
}

impl ExtensionMaps for PairMaps {
    fn project(&self, e: &Handle) -> Handle {
        self.quotient.encode(self.ext.split(e).1)
    }

    fn embed(&self, a: &Handle) -> Handle {
        self.ext.pair(a, 0)
    }

    fn restrict(&self, e: &Handle) -> Option<Handle> {
        let (a, x) = self.ext.unpair(e)?;
        (x == 0).then_some(a)
    }
}

/// The black-box extension of `G` by `A` defined by `f`, with the quotient
/// available as a table. `action` absent means central.
pub fn build_extension(
    kernel: Arc<dyn GroupOracle>,
    quotient: Arc<EncodedOracle>,
    f: Cochain2<Handle>,
    action: Option<Arc<dyn OracleAction>>,
    seed: u64,
) -> Result<ExtensionInstance, HardnessError> {
    let g = quotient.table();
    let module = OracleModule::new(kernel.clone(), action.clone());
    if f.order() != g.order() || !f.is_normalized(&module) {
        return Err(HardnessError::NotACocycle { x: 0, y: 0, z: 0 });
    }
    if let Some((x, y, z)) = cocycle_violation(&f, g, &module) {
        return Err(HardnessError::NotACocycle { x, y, z });
    }
    let ext = Arc::new(FactorSetExtension::new(kernel.clone(), g.clone(), f, action.clone(), derive(seed, 0x4531)));
    let maps = Arc::new(PairMaps { ext: ext.clone(), quotient: quotient.clone() });
    Ok(ExtensionInstance::new(ext, kernel, Quotient::Table(quotient), maps, action))
}

/// [`build_extension`] for table `A` and `G`, one extension per factor set.
/// All of them share one oracle for `A` and one for `G`.
pub fn build_extensions_table(
    a: &GroupTable,
    g: &GroupTable,
    fs: &[Cochain2<u32>],
    action: &ActionSpec,
    seed: u64,
) -> Result<Vec<ExtensionInstance>, HardnessError> {
    let (kernel, act) = table_module_oracle(a, action, derive(seed, 0x4133));
    let quotient = Arc::new(EncodedOracle::new(g.clone(), derive(seed, 0x4732)));
    let m = OracleModule::new(kernel.clone(), act.clone());
    fs.iter()
        .enumerate()
        .map(|(i, f)| {
            let values = f.values().iter().map(|&v| kernel.encode(v as usize)).collect();
            let f = Cochain2::new(g.order(), values, &m).map_err(|_| HardnessError::NotACocycle { x: 0, y: 0, z: 0 })?;
            build_extension(kernel.clone(), quotient.clone(), f, act.clone(), derive(seed, 0x100 + i as u64))
        })
        .collect()
}

/// `A` behind an encoding plus the matching oracle action (none when
/// trivial).
pub fn table_module_oracle(
    a: &GroupTable,
    action: &ActionSpec,
    seed: u64,
) -> (Arc<EncodedOracle>, Option<Arc<dyn OracleAction>>) {
    let kernel = Arc::new(EncodedOracle::new(a.clone(), seed));
    let act = match action {
        ActionSpec::Trivial => None,
        spec => Some(Arc::new(TableOracleAction { spec: spec.clone(), kernel: kernel.clone() }) as Arc<dyn OracleAction>),
    };
    (kernel, act)
}

/// The extension defined by `f` as a table: `(a, x)` is element
/// `x·|A| + a`, so `A` sits at indices `0..|A|`.
pub fn realize_extension_table(
    a: &GroupTable,
    g: &GroupTable,
    f: &Cochain2<u32>,
    action: &ActionSpec,
) -> Result<TableExtension, HardnessError> {
    let m = TableModule::new(a, action);
    if f.order() != g.order() || !f.is_normalized(&m) {
        return Err(HardnessError::NotACocycle { x: 0, y: 0, z: 0 });
    }
    if let Some((x, y, z)) = cocycle_violation(f, g, &m) {
        return Err(HardnessError::NotACocycle { x, y, z });
    }
    let (na, ng) = (a.order(), g.order());
    let n = na * ng;
    let mut product = Vec::with_capacity(n * n);
    for p in 0..n {
        let (x, pa) = (p / na, p % na);
        for q in 0..n {
            let (y, qa) = (q / na, q % na);
            let c = a.mul(a.mul(pa, action.apply(x, qa)), *f.get(x, y) as usize);
            product.push((g.mul(x, y) * na + c) as u32);
        }
    }
    let ext = GroupTable::from_flat(n, product)?;
    let proj = (0..n).map(|e| (e / na) as u32).collect();
    let embed = (0..na as u32).collect();
    Ok(TableExtension::new(ext, a.clone(), g.clone(), proj, embed)?)
}

/// A pair of central extensions of `Z₂` by `Z_N^*` with `f₁(1, 1) = y` and
/// `f₂(1, 1) = 1`.
pub struct QrInstance {
    pub modulus: u64,
    pub y: u64,
    pub seed: u64,
    pub kernel: Arc<UnitsOracle>,
    pub quotient: GroupTable,
    pub e1: ExtensionInstance,
    pub e2: ExtensionInstance,
    /// Whether `y` is a square, present only when built from a factorization.
    pub ground_truth: Option<bool>,
    /// The Jacobi symbol `(y / N)` for odd `N`; recorded, never used.
    pub jacobi: Option<i32>,
}

/// Builds the two extensions for `y` mod `N` with independent encodings.
pub fn make_qr_instance(modulus: u64, y: u64, seed: u64) -> Result<QrInstance, HardnessError> {
    make_qr_instance_with(modulus, y, seed, 4)
}

/// [`make_qr_instance`] with an explicit generator multiplier for `Z_N^*`.
pub fn make_qr_instance_with(modulus: u64, y: u64, seed: u64, multiplier: usize) -> Result<QrInstance, HardnessError> {
    if modulus < 3 {
        return Err(GroupError::NOutOfRange { n: modulus }.into());
    }
    let y = y % modulus;
    if num_integer::gcd(y, modulus) != 1 {
        return Err(HardnessError::NotAUnit { n: modulus, y });
    }
    let kernel = Arc::new(UnitsOracle::new(modulus, derive(seed, 0x41), multiplier)?);
    let g = GroupTable::cyclic(2);
    let module = OracleModule::new(kernel.clone(), None);
    let f_of = |v: u64| {
        let h = kernel.encode_residue(v).expect("unit");
        Cochain2::from_fn(2, &module, |_, _| h.clone())
    };
    let quotient = Arc::new(EncodedOracle::new(g.clone(), derive(seed, 0x47)));
    let e1 = build_extension(kernel.clone(), quotient.clone(), f_of(y), None, derive(seed, 0xe1))?;
    let e2 = build_extension(kernel.clone(), quotient, f_of(1), None, derive(seed, 0xe2))?;
    let jacobi = (modulus % 2 == 1).then(|| jacobi(y, modulus));
    Ok(QrInstance { modulus, y, seed, kernel, quotient: g, e1, e2, ground_truth: None, jacobi })
}

/// [`make_qr_instance`] with the ground truth filled in from `N`'s
/// factorization.
pub fn make_qr_instance_with_factors(
    modulus: u64,
    y: u64,
    seed: u64,
    factors: &Factorization,
) -> Result<QrInstance, HardnessError> {
    let mut inst = make_qr_instance(modulus, y, seed)?;
    inst.ground_truth = Some(qr_ground_truth_factored(modulus, y, factors)?);
    Ok(inst)
}

/// Whether `y` is a square mod `N`, by listing all squares.
pub fn qr_ground_truth(modulus: u64, y: u64) -> Result<bool, HardnessError> {
    if !(2..=QR_EXHAUSTIVE_MAX).contains(&modulus) {
        return Err(GroupError::NOutOfRange { n: modulus }.into());
    }
    let y = y % modulus;
    if num_integer::gcd(y, modulus) != 1 {
        return Err(HardnessError::NotAUnit { n: modulus, y });
    }
    Ok((1..modulus).any(|x| num_integer::gcd(x, modulus) == 1 && x * x % modulus == y))
}

/// Whether `y` is a square mod `N`, prime power by prime power.
pub fn qr_ground_truth_factored(modulus: u64, y: u64, factors: &Factorization) -> Result<bool, HardnessError> {
    if factors.value() != modulus as u128 {
        return Err(HardnessError::BadFactorization { n: modulus });
    }
    let y = y % modulus;
    if num_integer::gcd(y, modulus) != 1 {
        return Err(HardnessError::NotAUnit { n: modulus, y });
    }
    Ok(factors.factors.iter().all(|&(p, e)| match (p, e) {
        (2, 1) => true,
        (2, 2) => y % 4 == 1,
        (2, _) => y % 8 == 1,
        _ => pow_mod(y % p, (p - 1) / 2, p) == 1,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::factorize;
    use crate::group::oracle::enumerate_subgroup;

    #[test]
    fn qr_truth() {
        assert!(qr_ground_truth(15, 1).unwrap());
        assert!(qr_ground_truth(15, 4).unwrap());
        assert!(!qr_ground_truth(15, 2).unwrap());
        assert!(qr_ground_truth(21, 4).unwrap());
        assert!(!qr_ground_truth(21, 5).unwrap());
        assert!(qr_ground_truth(21, 3).is_err());
        for n in [8u64, 15, 16, 21, 24, 35, 45, 99] {
            let fact = factorize(n);
            for y in (1..n).filter(|&y| num_integer::gcd(y, n) == 1) {
                assert_eq!(qr_ground_truth(n, y).unwrap(), qr_ground_truth_factored(n, y, &fact).unwrap(), "{n} {y}");
            }
        }
    }

    #[test]
    fn pair_extension_is_a_group() {
        let inst = make_qr_instance(15, 2, 3).unwrap();
        let e = inst.e1.ext();
        let elems = enumerate_subgroup(e.as_ref(), &e.generators(), 64).unwrap();
        assert_eq!(elems.len(), 16);
        inst.e1.check_consistency(64).unwrap();
        let x = elems[5].clone();
        assert!(e.is_identity(&e.compose(&x, &e.invert(&x))));
        assert!(make_qr_instance(15, 5, 0).is_err());
        assert_eq!(inst.jacobi, Some(jacobi(2, 15)));
    }

    #[test]
    fn realized_tables() {
        let g = GroupTable::cyclic(2);
        let a = GroupTable::cyclic(4);
        let triv = ActionSpec::Trivial;
        let m = TableModule::new(&a, &triv);
        let f1 = Cochain2::from_fn(2, &m, |_, _| 1);
        let t = realize_extension_table(&a, &g, &f1, &triv).unwrap();
        assert!((0..8).any(|x| t.ext().element_order(x) == 8));
        let f2 = Cochain2::from_fn(2, &m, |_, _| 2);
        let t = realize_extension_table(&a, &g, &f2, &triv).unwrap();
        assert_eq!((0..8).map(|x| t.ext().element_order(x)).max(), Some(4));

        let z3 = GroupTable::cyclic(3);
        let m3 = TableModule::new(&z3, &triv);
        let bad = crate::cohomology::delta2(3, 1, 1, &1, &m3);
        assert!(matches!(realize_extension_table(&z3, &z3, &bad, &triv), Err(HardnessError::NotACocycle { .. })));
        let insts = build_extensions_table(&a, &g, &[f1, f2], &triv, 5).unwrap();
        insts[0].check_consistency(64).unwrap();
        insts[1].check_consistency(64).unwrap();
    }

    #[test]
    fn non_central() {
        let g = GroupTable::cyclic(2);
        let a = GroupTable::cyclic(3);
        let inv = ActionSpec::inversion(&g, &a).unwrap();
        let m = TableModule::new(&a, &inv);
        let zero = Cochain2::zero(2, &m);
        let t = realize_extension_table(&a, &g, &zero, &inv).unwrap();
        assert!(!t.ext().is_abelian());
        assert_eq!(t.conjugation_action(), inv);
        let inst = build_extensions_table(&a, &g, &[zero], &inv, 1).unwrap().remove(0);
        inst.check_consistency(64).unwrap();
        assert!(!inst.is_central());
    }
}
