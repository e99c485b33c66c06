use std::sync::Arc;

use super::table::GroupTable;
use super::GroupError;

/// How `G` acts on `A`: a homomorphism `G → Aut(A)`, stored as one image
/// array per element of `G`, or the trivial action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActionSpec {
    Trivial,
    Table(Arc<Vec<Vec<u32>>>),
}

impl ActionSpec {
    /// Validates per-element image arrays: each must be an automorphism of
    /// `A` and `x ↦ φ(x)` must be a homomorphism.
    pub fn from_images(g: &GroupTable, a: &GroupTable, images: Vec<Vec<u32>>) -> Result<Self, GroupError> {
        let (n, m) = (g.order(), a.order());
        let bad = |msg: String| Err(GroupError::InvalidAction(msg));
        if images.len() != n {
            return bad(format!("expected {n} image arrays, got {}", images.len()));
        }
        for (x, img) in images.iter().enumerate() {
            if img.len() != m {
                return bad(format!("image array {x} has length {}, expected {m}", img.len()));
            }
            let mut hit = vec![false; m];
            for &v in img {
                if v as usize >= m || std::mem::replace(&mut hit[v as usize], true) {
                    return bad(format!("image array {x} is not a bijection"));
                }
            }
            for p in 0..m {
                for q in 0..m {
                    if img[a.mul(p, q)] as usize != a.mul(img[p] as usize, img[q] as usize) {
                        return bad(format!("image array {x} is not a homomorphism at ({p}, {q})"));
                    }
                }
            }
        }
        if images[0].iter().enumerate().any(|(p, &v)| v as usize != p) {
            return bad("identity of G must act trivially".into());
        }
        for x in 0..n {
            for y in 0..n {
                let xy = g.mul(x, y);
                if (0..m).any(|p| images[xy][p] != images[x][images[y][p] as usize]) {
                    return bad(format!("action is not a homomorphism at ({x}, {y})"));
                }
            }
        }
        if images.iter().all(|img| img.iter().enumerate().all(|(p, &v)| v as usize == p)) {
            return Ok(ActionSpec::Trivial);
        }
        Ok(ActionSpec::Table(Arc::new(images)))
    }

    pub fn from_fn(g: &GroupTable, a: &GroupTable, f: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        let images = (0..g.order()).map(|x| (0..a.order()).map(|p| f(x, p) as u32).collect()).collect();
        Self::from_images(g, a, images)
    }

    /// Elements of odd index act by inversion. Valid for cyclic `G` of even
    /// order (in particular `Z₂`) and abelian `A`.
    pub fn inversion(g: &GroupTable, a: &GroupTable) -> Result<Self, GroupError> {
        Self::from_fn(g, a, |x, p| if x % 2 == 1 { a.inv(p) } else { p })
    }

    #[inline]
    pub fn apply(&self, x: usize, p: usize) -> usize {
        match self {
            ActionSpec::Trivial => p,
            ActionSpec::Table(images) => images[x][p] as usize,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, ActionSpec::Trivial)
    }

    pub fn images(&self) -> Option<&[Vec<u32>]> {
        match self {
            ActionSpec::Trivial => None,
            ActionSpec::Table(images) => Some(images),
        }
    }
}
