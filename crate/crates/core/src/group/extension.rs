use std::sync::Arc;

use super::action::ActionSpec;
use super::encoded::EncodedOracle;
use super::oracle::{commutator, enumerate_subgroup, GroupOracle, Handle, HandleMap};
use super::table::GroupTable;
use super::GroupError;
use crate::seed::derive;

/// The action of `G` on a black-box `A`, indexed by elements of a table `G`.
pub trait OracleAction: Send + Sync {
    fn act(&self, x: usize, a: &Handle) -> Handle;
}

/// The maps tying an extension to its kernel and quotient.
pub trait ExtensionMaps: Send + Sync {
    /// `π : E → G`.
    fn project(&self, e: &Handle) -> Handle;
    /// `A → E`.
    fn embed(&self, a: &Handle) -> Handle;
    /// The `A`-handle of an element of `E` lying in the image of `A`.
    fn restrict(&self, e: &Handle) -> Option<Handle>;
}

/// How the quotient `G` is available.
#[derive(Clone)]
pub enum Quotient {
    Table(Arc<EncodedOracle>),
    BlackBox { oracle: Arc<dyn GroupOracle>, abelian: bool },
}

/// An extension `1 → A → E → G → 1` with `E` and `A` given as black boxes.
/// When `action` is absent the extension is declared central.
#[derive(Clone)]
pub struct ExtensionInstance {
    ext: Arc<dyn GroupOracle>,
    kernel: Arc<dyn GroupOracle>,
    quotient: Quotient,
    maps: Arc<dyn ExtensionMaps>,
    action: Option<Arc<dyn OracleAction>>,
}

impl ExtensionInstance {
    pub fn new(
        ext: Arc<dyn GroupOracle>,
        kernel: Arc<dyn GroupOracle>,
        quotient: Quotient,
        maps: Arc<dyn ExtensionMaps>,
        action: Option<Arc<dyn OracleAction>>,
    ) -> Self {
        ExtensionInstance { ext, kernel, quotient, maps, action }
    }

    pub fn ext(&self) -> &Arc<dyn GroupOracle> {
        &self.ext
    }

    pub fn kernel(&self) -> &Arc<dyn GroupOracle> {
        &self.kernel
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn quotient_oracle(&self) -> Arc<dyn GroupOracle> {
        match &self.quotient {
            Quotient::Table(o) => o.clone(),
            Quotient::BlackBox { oracle, .. } => oracle.clone(),
        }
    }

    pub fn quotient_table(&self) -> Option<&GroupTable> {
        match &self.quotient {
            Quotient::Table(o) => Some(o.table()),
            Quotient::BlackBox { .. } => None,
        }
    }

    pub fn quotient_is_abelian(&self) -> bool {
        match &self.quotient {
            Quotient::Table(o) => o.table().is_abelian(),
            Quotient::BlackBox { abelian, .. } => *abelian,
        }
    }

    pub fn maps(&self) -> &Arc<dyn ExtensionMaps> {
        &self.maps
    }

    pub fn project(&self, e: &Handle) -> Handle {
        self.maps.project(e)
    }

    /// The index in the quotient table of `π(e)`, for table quotients.
    pub fn project_index(&self, e: &Handle) -> Option<usize> {
        match &self.quotient {
            Quotient::Table(o) => o.decode(&self.maps.project(e)),
            Quotient::BlackBox { .. } => None,
        }
    }

    pub fn embed(&self, a: &Handle) -> Handle {
        self.maps.embed(a)
    }

    pub fn restrict(&self, e: &Handle) -> Option<Handle> {
        self.maps.restrict(e)
    }

    /// Generators of `A` as elements of `E`.
    pub fn kernel_generators(&self) -> Vec<Handle> {
        self.kernel.generators().iter().map(|a| self.embed(a)).collect()
    }

    pub fn action(&self) -> Option<&Arc<dyn OracleAction>> {
        self.action.as_ref()
    }

    pub fn is_central(&self) -> bool {
        self.action.is_none()
    }

    /// The same extension with the quotient table hidden behind its oracle.
    pub fn with_opaque_quotient(&self) -> Self {
        let quotient = match &self.quotient {
            Quotient::Table(o) => {
                Quotient::BlackBox { abelian: o.table().is_abelian(), oracle: o.clone() as Arc<dyn GroupOracle> }
            }
            q => q.clone(),
        };
        ExtensionInstance { quotient, ..self.clone() }
    }

    /// Exhaustive consistency check for small instances: `π` is a surjective
    /// homomorphism with kernel `A`, and `A` is central when no action is
    /// given.
    pub fn check_consistency(&self, cap: usize) -> Result<(), GroupError> {
        let bad = |m: &str| Err(GroupError::InvalidExtension(m.to_string()));
        let elems = enumerate_subgroup(self.ext.as_ref(), &self.ext.generators(), cap)?;
        let q = self.quotient_oracle();
        for x in &elems {
            for y in &elems {
                let lhs = self.project(&self.ext.compose(x, y));
                let rhs = q.compose(&self.project(x), &self.project(y));
                if !q.equal(&lhs, &rhs) {
                    return bad("projection is not a homomorphism");
                }
            }
        }
        let mut images: HandleMap<'_, dyn GroupOracle, ()> = HandleMap::new(q.as_ref());
        for x in &elems {
            images.insert(self.project(x), ());
        }
        let g_elems = enumerate_subgroup(q.as_ref(), &q.generators(), cap)?;
        if images.len() != g_elems.len() {
            return bad("projection is not surjective");
        }
        let a_elems = enumerate_subgroup(self.kernel.as_ref(), &self.kernel.generators(), cap)?;
        let kernel_size = elems.iter().filter(|x| q.is_identity(&self.project(x))).count();
        if kernel_size != a_elems.len() || elems.len() != a_elems.len() * g_elems.len() {
            return bad("kernel of the projection differs from A");
        }
        for a in &a_elems {
            let ea = self.embed(a);
            if !q.is_identity(&self.project(&ea)) {
                return bad("A does not embed into the kernel");
            }
            if self.action.is_none() && elems.iter().any(|x| !self.ext.is_identity(&commutator(self.ext.as_ref(), &ea, x))) {
                return bad("A is not central");
            }
        }
        Ok(())
    }
}

/// An extension with every group given by its table, `proj: E → G` and
/// `embed: A → E` as index arrays.
#[derive(Clone, Debug)]
pub struct TableExtension {
    ext: GroupTable,
    kernel: GroupTable,
    quotient: GroupTable,
    proj: Vec<u32>,
    embed: Vec<u32>,
    restrict: Vec<u32>,
}

const NOT_IN_A: u32 = u32::MAX;

impl TableExtension {
    pub fn new(
        ext: GroupTable,
        kernel: GroupTable,
        quotient: GroupTable,
        proj: Vec<u32>,
        embed: Vec<u32>,
    ) -> Result<Self, GroupError> {
        let bad = |m: String| Err(GroupError::InvalidExtension(m));
        let (ne, na, ng) = (ext.order(), kernel.order(), quotient.order());
        if proj.len() != ne || embed.len() != na {
            return bad("projection or embedding has the wrong length".into());
        }
        if proj.iter().any(|&g| g as usize >= ng) || embed.iter().any(|&e| e as usize >= ne) {
            return bad("map value out of range".into());
        }
        if ne != na * ng {
            return bad(format!("|E| = {ne} but |A|·|G| = {}", na * ng));
        }
        if !kernel.is_abelian() {
            return bad("A must be abelian".into());
        }
        for x in 0..ne {
            for y in 0..ne {
                if proj[ext.mul(x, y)] as usize != quotient.mul(proj[x] as usize, proj[y] as usize) {
                    return bad(format!("projection is not a homomorphism at ({x}, {y})"));
                }
            }
        }
        let mut restrict = vec![NOT_IN_A; ne];
        for (a, &e) in embed.iter().enumerate() {
            if restrict[e as usize] != NOT_IN_A {
                return bad("embedding is not injective".into());
            }
            restrict[e as usize] = a as u32;
        }
        for a in 0..na {
            for b in 0..na {
                if embed[kernel.mul(a, b)] as usize != ext.mul(embed[a] as usize, embed[b] as usize) {
                    return bad(format!("embedding is not a homomorphism at ({a}, {b})"));
                }
            }
        }
        for x in 0..ne {
            if (proj[x] == 0) != (restrict[x] != NOT_IN_A) {
                return bad(format!("element {x} breaks kernel(proj) = image(embed)"));
            }
        }
        Ok(TableExtension { ext, kernel, quotient, proj, embed, restrict })
    }

    pub fn ext(&self) -> &GroupTable {
        &self.ext
    }

    pub fn kernel(&self) -> &GroupTable {
        &self.kernel
    }

    pub fn quotient(&self) -> &GroupTable {
        &self.quotient
    }

    pub fn project(&self, e: usize) -> usize {
        self.proj[e] as usize
    }

    pub fn embed(&self, a: usize) -> usize {
        self.embed[a] as usize
    }

    pub fn restrict(&self, e: usize) -> Option<usize> {
        let r = self.restrict[e];
        (r != NOT_IN_A).then_some(r as usize)
    }

    pub fn projection(&self) -> &[u32] {
        &self.proj
    }

    pub fn embedding(&self) -> &[u32] {
        &self.embed
    }

    /// Elements of `E` over `g`, in increasing order.
    pub fn preimages(&self, g: usize) -> Vec<usize> {
        (0..self.ext.order()).filter(|&e| self.proj[e] as usize == g).collect()
    }

    pub fn is_central(&self) -> bool {
        self.embed.iter().all(|&a| (0..self.ext.order()).all(|e| self.ext.mul(a as usize, e) == self.ext.mul(e, a as usize)))
    }

    /// The action induced by conjugation, `φ(x)(a) = s(x) a s(x)⁻¹`.
    pub fn conjugation_action(&self) -> ActionSpec {
        let images: Vec<Vec<u32>> = (0..self.quotient.order())
            .map(|x| {
                let s = self.preimages(x)[0];
                let si = self.ext.inv(s);
                (0..self.kernel.order())
                    .map(|a| {
                        let c = self.ext.mul(self.ext.mul(s, self.embed(a)), si);
                        self.restrict(c).expect("A is normal") as u32
                    })
                    .collect()
            })
            .collect();
        ActionSpec::from_images(&self.quotient, &self.kernel, images).expect("conjugation is an action")
    }

    /// Wraps every group behind opaque handles with encodings derived from
    /// `seed`.
    pub fn to_instance(&self, seed: u64) -> ExtensionInstance {
        let kernel = Arc::new(EncodedOracle::new(self.kernel.clone(), derive(seed, 2)));
        let quotient = Arc::new(EncodedOracle::new(self.quotient.clone(), derive(seed, 3)));
        self.to_instance_sharing(kernel, quotient, seed)
    }

    /// Like [`TableExtension::to_instance`] but reusing given oracles for `A`
    /// and `G`, so that several extensions share their handles.
    pub fn to_instance_sharing(
        &self,
        kernel: Arc<EncodedOracle>,
        quotient: Arc<EncodedOracle>,
        seed: u64,
    ) -> ExtensionInstance {
        assert!(kernel.table() == &self.kernel && quotient.table() == &self.quotient, "oracles wrap different tables");
        let maps = Arc::new(TableMaps {
            ext: Arc::new(EncodedOracle::new(self.ext.clone(), derive(seed, 1))),
            kernel,
            quotient,
            data: self.clone(),
        });
        let action = match self.conjugation_action() {
            ActionSpec::Trivial => None,
            spec => Some(Arc::new(TableOracleAction { spec, kernel: maps.kernel.clone() }) as Arc<dyn OracleAction>),
        };
        ExtensionInstance::new(
            maps.ext.clone(),
            maps.kernel.clone(),
            Quotient::Table(maps.quotient.clone()),
            maps,
            action,
        )
    }
}

/// Black-box instances of extensions that all have the same `A` and `G`
/// tables, sharing one oracle for each and with independent encodings of
/// the extensions.
pub fn shared_instances(exts: &[&TableExtension], seed: u64) -> Vec<ExtensionInstance> {
    let Some(first) = exts.first() else { return Vec::new() };
    let kernel = Arc::new(EncodedOracle::new(first.kernel.clone(), derive(seed, 2)));
    let quotient = Arc::new(EncodedOracle::new(first.quotient.clone(), derive(seed, 3)));
    exts.iter()
        .enumerate()
        .map(|(i, e)| e.to_instance_sharing(kernel.clone(), quotient.clone(), derive(seed, 0x100 + i as u64)))
        .collect()
}

struct TableMaps {
    ext: Arc<EncodedOracle>,
    kernel: Arc<EncodedOracle>,
    quotient: Arc<EncodedOracle>,
    data: TableExtension,
}

impl ExtensionMaps for TableMaps {
    fn project(&self, e: &Handle) -> Handle {
        let x = self.ext.decode(e).expect("handle was not issued by E");
        self.quotient.encode(self.data.project(x))
    }

    fn embed(&self, a: &Handle) -> Handle {
        let x = self.kernel.decode(a).expect("handle was not issued by A");
        self.ext.encode(self.data.embed(x))
    }

    fn restrict(&self, e: &Handle) -> Option<Handle> {
        let x = self.ext.decode(e)?;
        self.data.restrict(x).map(|a| self.kernel.encode(a))
    }
}

/// A table action applied to handles of an encoded `A`.
pub struct TableOracleAction {
    pub spec: ActionSpec,
    pub kernel: Arc<EncodedOracle>,
}

impl OracleAction for TableOracleAction {
    fn act(&self, x: usize, a: &Handle) -> Handle {
        let p = self.kernel.decode(a).expect("handle was not issued by A");
        self.kernel.encode(self.spec.apply(x, p))
    }
}
