//! Fixed-point evaluation of self-similar closures by digit descent.
//!
//! Each descriptor partitions by lowest digit; classes drop one modulus
//! level and the tail scale steps down inside the digit-0 class. The level
//! combination law is 1/L = sum over classes of 1/(1 + L_class). When a
//! descriptor recurs on the active path the engine carries the unknown as a
//! Mobius transform; the frame that owns the unknown closes it as the
//! positive fixed point. Only one unknown can be live at a time: siblings of
//! the tail-carrying class are finite coset unions with rational capacities.

use std::collections::{HashMap, HashSet};

use crate::capacity::descriptor::{Descriptor, RootShape};
use crate::error::{Error, Result};
use crate::exactnum::{rat, rat_int, Exact, MobiusTransform, Rational};
use crate::padic::ResidueSet;

enum EngineExpr {
    Known(Exact),
    Pending { at: usize, t: MobiusTransform },
}

struct Engine {
    root: RootShape,
    root_desc: Descriptor,
    memo: HashMap<Descriptor, Exact>,
    stack: Vec<Descriptor>,
    seen: HashSet<Descriptor>,
    bound: u64,
    floor: Rational,
}

/// Capacity of `base cosets U p^scale * self` for a nonzero base.
pub(crate) fn self_similar_capacity(base: &ResidueSet, scale: u32) -> Result<Exact> {
    if base.is_empty() {
        return Err(Error::EmptySet);
    }
    if scale == 0 {
        return Err(Error::InvalidParams("self-similar scale must be >= 1".into()));
    }
    let p = base.p();
    let root = RootShape {
        base: base.minimal_exact_form(),
        scale,
    };
    let root_desc = Descriptor::canonical(root.base.clone(), Some(scale), &root)?;

    // Distinct-descriptor budget; blowing through it means the descent is
    // not settling into the expected finite structure.
    let bound = 2u64
        .saturating_pow(root.base.len().min(24) as u32)
        .saturating_mul(scale as u64 + root.base.e() as u64)
        .max(1 << 12);

    let mut engine = Engine {
        floor: rat(1, p as i64 - 1),
        root,
        root_desc: root_desc.clone(),
        memo: HashMap::new(),
        stack: Vec::new(),
        seen: HashSet::new(),
        bound,
    };
    match engine.eval(&root_desc)? {
        EngineExpr::Known(v) => {
            if engine.below_floor(&v)? {
                return Err(Error::EngineDiverged(
                    "capacity fell below the full-ring floor 1/(p-1)".into(),
                ));
            }
            Ok(v)
        }
        EngineExpr::Pending { .. } => Err(Error::EngineDiverged(
            "unresolved unknown escaped the root descriptor".into(),
        )),
    }
}

impl Engine {
    fn below_floor(&self, v: &Exact) -> Result<bool> {
        Ok(v.cmp_exact(&Exact::Rat(self.floor.clone()))? == std::cmp::Ordering::Less)
    }

    fn eval(&mut self, desc: &Descriptor) -> Result<EngineExpr> {
        if desc.is_full_ring() {
            return Ok(EngineExpr::Known(Exact::Rat(self.floor.clone())));
        }
        if let Some(v) = self.memo.get(desc) {
            return Ok(EngineExpr::Known(v.clone()));
        }
        if let Some(pos) = self.stack.iter().position(|d| d == desc) {
            return Ok(EngineExpr::Pending {
                at: pos,
                t: MobiusTransform::identity(),
            });
        }
        if self.seen.insert(desc.clone()) && self.seen.len() as u64 > self.bound {
            return Err(Error::EngineDiverged(format!(
                "more than {} distinct descriptors; descent is not stabilizing",
                self.bound
            )));
        }

        // Tail-only descriptor: p^t * root, so L = t + L_root by scaling.
        if desc.cosets().is_empty() {
            let t = desc.tail().expect("canonical empty descriptor keeps its tail");
            let shift = rat_int(t as i64);
            let root_desc = self.root_desc.clone();
            return match self.eval(&root_desc)? {
                EngineExpr::Known(v) => Ok(EngineExpr::Known(v.add(&Exact::Rat(shift))?)),
                EngineExpr::Pending { at, t: m } => Ok(EngineExpr::Pending {
                    at,
                    t: MobiusTransform::add_constant(shift).compose(&m)?,
                }),
            };
        }

        let my_pos = self.stack.len();
        self.stack.push(desc.clone());
        let combined = self.combine_children(desc);
        self.stack.pop();

        match combined? {
            EngineExpr::Known(v) => {
                self.memo.insert(desc.clone(), v.clone());
                Ok(EngineExpr::Known(v))
            }
            EngineExpr::Pending { at, t } if at == my_pos => {
                let v = t.positive_fixed_point()?;
                if self.below_floor(&v)? {
                    return Err(Error::EngineDiverged(
                        "fixed point fell below the full-ring floor 1/(p-1)".into(),
                    ));
                }
                self.memo.insert(desc.clone(), v.clone());
                Ok(EngineExpr::Known(v))
            }
            pending => Ok(pending),
        }
    }

    fn combine_children(&mut self, desc: &Descriptor) -> Result<EngineExpr> {
        let kids = desc.children(&self.root)?;
        let mut sum = rat_int(0);
        let mut pending: Option<(usize, MobiusTransform)> = None;
        for kid in &kids {
            match self.eval(kid)? {
                EngineExpr::Known(Exact::Rat(r)) => {
                    sum += (rat_int(1) + r).recip();
                }
                EngineExpr::Known(Exact::Surd(_)) => {
                    // Tail-free subtrees are rational and the tail subtree is
                    // pending while its unknown is active, so this cannot
                    // arise from a well-formed descent.
                    return Err(Error::UnsupportedNesting(
                        "irrational intermediate while a tail is unresolved".into(),
                    ));
                }
                EngineExpr::Pending { at, t } => {
                    if pending.is_some() {
                        return Err(Error::UnsupportedNesting(
                            "two digit classes carry unknowns at once".into(),
                        ));
                    }
                    pending = Some((at, t));
                }
            }
        }
        match pending {
            None => Ok(EngineExpr::Known(Exact::Rat(sum.recip()))),
            Some((at, t)) => {
                // 1/L = sum + 1/(1 + T(x)).
                let m = MobiusTransform::add_constant(rat_int(1)).compose(&t)?;
                let m = MobiusTransform::reciprocal().compose(&m)?;
                let m = MobiusTransform::add_constant(sum).compose(&m)?;
                let m = MobiusTransform::reciprocal().compose(&m)?;
                Ok(EngineExpr::Pending { at, t: m })
            }
        }
    }
}
