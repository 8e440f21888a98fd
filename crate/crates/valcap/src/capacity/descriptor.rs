//! Canonical descriptors for the sets arising during digit descent on a
//! self-similar closure.
//!
//! A descriptor denotes `cosets U p^t * R` where R is the root set of the
//! evaluation (the whole closure) and `t` is the tail scale; `tail = None`
//! drops the second part. Canonicalization makes structural recursion
//! visible as plain equality:
//!   - a tail of scale 0 is folded into the cosets (making the descriptor
//!     literally contain the root set, with a fresh tail at the root scale),
//!   - a full-ring coset part absorbs everything,
//!   - the coset part is reduced to its minimal exact modulus,
//!   - an empty coset part is normalized to modulus exponent 0.

use crate::error::Result;
use crate::padic::ResidueSet;

/// The root of one evaluation: base cosets plus `p^scale * self`.
#[derive(Debug, Clone)]
pub(crate) struct RootShape {
    pub base: ResidueSet,
    pub scale: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Descriptor {
    cosets: ResidueSet,
    tail: Option<u32>,
}

impl Descriptor {
    pub fn canonical(cosets: ResidueSet, tail: Option<u32>, root: &RootShape) -> Result<Descriptor> {
        let mut cosets = cosets;
        let mut tail = tail;

        // Scale 0 means the tail contributes the root set itself; merging
        // re-introduces the root's own tail. Root scale >= 1, so this fires
        // at most once.
        if tail == Some(0) {
            let e = cosets.e().max(root.base.e());
            let lifted_root = root.base.lift_to(e)?;
            cosets = if cosets.is_empty() {
                lifted_root
            } else {
                cosets.lift_to(e)?.union(&lifted_root)?
            };
            tail = Some(root.scale);
        }

        if cosets.is_full_ring() {
            return Ok(Descriptor {
                cosets: cosets.minimal_exact_form(),
                tail: None,
            });
        }
        if cosets.is_empty() {
            debug_assert!(matches!(tail, Some(t) if t >= 1));
            return Ok(Descriptor {
                cosets: ResidueSet::empty(cosets.p(), 0)?,
                tail,
            });
        }
        Ok(Descriptor {
            cosets: cosets.minimal_exact_form(),
            tail,
        })
    }

    pub fn cosets(&self) -> &ResidueSet {
        &self.cosets
    }

    pub fn tail(&self) -> Option<u32> {
        self.tail
    }

    pub fn is_full_ring(&self) -> bool {
        self.cosets.is_full_ring()
    }

    /// One digit of descent: splits the cosets by lowest digit and steps the
    /// tail down into the digit-0 class. Callers handle full-ring and
    /// empty-coset descriptors before asking for children.
    pub fn children(&self, root: &RootShape) -> Result<Vec<Descriptor>> {
        debug_assert!(!self.is_full_ring() && !self.cosets.is_empty());
        let p = self.cosets.p();
        let parts = self.cosets.partition_mod_p()?;
        let mut out = Vec::with_capacity(parts.len() + 1);
        let mut saw_zero_digit = false;
        for (digit, class) in parts {
            let child_tail = if digit == 0 {
                saw_zero_digit = true;
                self.tail.map(|t| t - 1)
            } else {
                None
            };
            out.push(Descriptor::canonical(class, child_tail, root)?);
        }
        if !saw_zero_digit {
            if let Some(t) = self.tail {
                let empty = ResidueSet::empty(p, 0)?;
                out.push(Descriptor::canonical(empty, Some(t - 1), root)?);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root_three_squares() -> RootShape {
        RootShape {
            base: ResidueSet::new(2, 3, [1, 2, 3, 5, 6]).unwrap(),
            scale: 2,
        }
    }

    #[test]
    fn canonical_merges_zero_tail() {
        let root = root_three_squares();
        let d = Descriptor::canonical(ResidueSet::empty(2, 0).unwrap(), Some(0), &root).unwrap();
        // Empty cosets with a zero tail become exactly the root descriptor.
        let root_desc =
            Descriptor::canonical(root.base.clone(), Some(root.scale), &root).unwrap();
        assert_eq!(d, root_desc);
    }

    #[test]
    fn canonical_full_ring_drops_tail() {
        let root = root_three_squares();
        let full = ResidueSet::new(2, 2, 0..4).unwrap();
        let d = Descriptor::canonical(full, Some(3), &root).unwrap();
        assert!(d.is_full_ring());
        assert_eq!(d.tail(), None);
        assert_eq!(d.cosets().e(), 0);
    }

    #[test]
    fn canonical_reduces_modulus() {
        let root = root_three_squares();
        let odds = ResidueSet::new(2, 3, [1, 3, 5, 7]).unwrap();
        let d = Descriptor::canonical(odds, None, &root).unwrap();
        assert_eq!(d.cosets().e(), 1);
        assert_eq!(d.cosets().residues(), &[1]);
    }

    #[test]
    fn children_route_tail_to_zero_digit() {
        let root = root_three_squares();
        let desc = Descriptor::canonical(root.base.clone(), Some(root.scale), &root).unwrap();
        let kids = desc.children(&root).unwrap();
        // Digit 0: {2,6}/2 = {1,3} mod 4, tail 1. Digit 1: {1,3,5}-1 over 2
        // = {0,1,2} mod 4, no tail.
        assert_eq!(kids.len(), 2);
        assert_eq!(kids[0].cosets().residues(), &[1]);
        assert_eq!(kids[0].cosets().e(), 1, "odd cosets mod 4 reduce to mod 2");
        assert_eq!(kids[0].tail(), Some(1));
        assert_eq!(kids[1].cosets().residues(), &[0, 1, 2]);
        assert_eq!(kids[1].tail(), None);
    }

    #[test]
    fn tail_only_descriptor_from_missing_zero_digit() {
        let root = RootShape {
            base: ResidueSet::new(3, 1, [1, 2]).unwrap(),
            scale: 2,
        };
        let desc = Descriptor::canonical(root.base.clone(), Some(2), &root).unwrap();
        let kids = desc.children(&root).unwrap();
        // Digits 1 and 2 give full rings; the tail spawns an empty child.
        assert_eq!(kids.len(), 3);
        assert!(kids[0].is_full_ring());
        assert!(kids[1].is_full_ring());
        assert!(kids[2].cosets().is_empty());
        assert_eq!(kids[2].tail(), Some(1));
    }

    #[test]
    fn recursion_becomes_equality() {
        // Root {1,2} mod 3 with scale 2: descending twice through the tail
        // chain must produce the root descriptor again.
        let root = RootShape {
            base: ResidueSet::new(3, 1, [1, 2]).unwrap(),
            scale: 2,
        };
        let desc = Descriptor::canonical(root.base.clone(), Some(2), &root).unwrap();
        let kids = desc.children(&root).unwrap();
        let tail_child = kids.last().unwrap().clone();
        assert!(tail_child.cosets().is_empty());
        // Tail scale 1 child descends to tail scale 0, which merges to root.
        let empty = ResidueSet::empty(3, 0).unwrap();
        let merged = Descriptor::canonical(empty, Some(0), &root).unwrap();
        assert_eq!(merged, desc);
    }
}
