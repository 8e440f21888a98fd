//! Exact characteristic sequences streamed from a closure description, with
//! no integer truncation at all.
//!
//! Each canonical descriptor reached by digit descent gets a node producing
//! its own characteristic sequence. A node's value at position n is the
//! cheapest way to place one more element given how many were already drawn
//! from each digit class:
//!
//!   alpha(n) = min over children c of  w_c * k_c + alpha_c(k_c)
//!
//! where k_c is the child's cursor (elements already drawn from it) and w_c
//! counts the p-adic levels collapsed by the descent into that child. Pairs
//! from different classes differ in their lowest digit and contribute
//! nothing. Full-ring leaves are known in closed form; descriptors equal to
//! the root close the cycle by reading the root's own partial output, which
//! is what makes this a scheduling problem rather than plain recursion.

use std::collections::HashMap;

use crate::capacity::descriptor::{Descriptor, RootShape};
use crate::error::{Error, Result};
use crate::ordering::{CharSequence, Provenance};
use crate::padic::factorial_valuation;
use crate::powersets::ClosureSpec;

struct ChildRef {
    node: usize,
    weight: u64,
}

struct Node {
    children: Vec<ChildRef>,
    cursors: Vec<usize>,
    emitted: Vec<u64>,
    done: bool,
}

const ROOT: usize = 0;

/// Characteristic sequence alpha(0..=n_max) of the closed set described by
/// `spec`, computed symbolically.
pub fn alpha_stream_from_spec(spec: &ClosureSpec, n_max: usize) -> Result<CharSequence> {
    let needed = n_max + 1;
    let (root, root_desc) = match spec {
        ClosureSpec::CosetUnion { residues } => {
            if residues.is_empty() {
                return Err(Error::EmptySet);
            }
            // The root shape is never reached: no descriptor here has a tail.
            let root = RootShape {
                base: residues.minimal_exact_form(),
                scale: 1,
            };
            let desc = Descriptor::canonical(root.base.clone(), None, &root)?;
            (root, desc)
        }
        ClosureSpec::SelfSimilar { base, scale } => {
            if base.is_empty() {
                return Err(Error::EmptySet);
            }
            if *scale == 0 {
                return Err(Error::InvalidParams("scale must be positive".into()));
            }
            let root = RootShape {
                base: base.minimal_exact_form(),
                scale: *scale,
            };
            let desc = Descriptor::canonical(root.base.clone(), Some(*scale), &root)?;
            (root, desc)
        }
    };
    let p = root.base.p();
    let sets_bound = 1u64
        .checked_shl(root.base.len().min(24) as u32)
        .unwrap_or(u64::MAX)
        .saturating_mul(u64::from(root.scale + root.base.e()))
        .max(4096);

    let mut ids: HashMap<Descriptor, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut work: Vec<Descriptor> = Vec::new();
    intern(root_desc, &mut ids, &mut nodes, &mut work, needed, p);
    while let Some(desc) = work.pop() {
        if ids.len() as u64 > sets_bound {
            return Err(Error::EngineDiverged(format!(
                "more than {sets_bound} distinct descriptors; descent is not stabilizing"
            )));
        }
        let id = ids[&desc];
        let mut children = Vec::new();
        for kid in desc.children(&root)? {
            if kid.cosets().is_empty() {
                // Tail-only child p^s * root: one digit of descent plus s
                // levels of uniform scaling, read straight off the root.
                let s = kid.tail().expect("empty descriptor keeps its tail");
                children.push(ChildRef {
                    node: ROOT,
                    weight: 1 + u64::from(s),
                });
            } else {
                let kid_id = intern(kid, &mut ids, &mut nodes, &mut work, needed, p);
                children.push(ChildRef {
                    node: kid_id,
                    weight: 1,
                });
            }
        }
        nodes[id].cursors = vec![0; children.len()];
        nodes[id].children = children;
    }

    schedule(&mut nodes, needed)?;
    let values = std::mem::take(&mut nodes[ROOT].emitted);
    CharSequence::new(values, Provenance::SpecStream)
}

/// Returns the node id for a descriptor, creating the node on first sight.
/// Full-ring nodes are born complete; everything else joins the worklist.
fn intern(
    desc: Descriptor,
    ids: &mut HashMap<Descriptor, usize>,
    nodes: &mut Vec<Node>,
    work: &mut Vec<Descriptor>,
    needed: usize,
    p: u64,
) -> usize {
    if let Some(&id) = ids.get(&desc) {
        return id;
    }
    let id = nodes.len();
    if desc.is_full_ring() {
        nodes.push(Node {
            children: Vec::new(),
            cursors: Vec::new(),
            emitted: (0..needed as u64).map(|n| factorial_valuation(n, p)).collect(),
            done: true,
        });
    } else {
        nodes.push(Node {
            children: Vec::new(),
            cursors: Vec::new(),
            emitted: Vec::new(),
            done: false,
        });
        work.push(desc.clone());
    }
    ids.insert(desc, id);
    id
}

/// Next value for one node, or None while a cursor still waits on data. The
/// min over available candidates only counts once every stalled child's
/// lower bound (sequences never decrease) is no better.
fn next_value(nodes: &[Node], id: usize, needed: usize) -> Option<(u64, usize)> {
    let node = &nodes[id];
    if node.emitted.len() >= needed {
        return None;
    }
    let mut best: Option<(u64, usize)> = None;
    let mut stalled_floor: Option<u64> = None;
    for (ci, cref) in node.children.iter().enumerate() {
        let k = node.cursors[ci];
        let child = &nodes[cref.node];
        let base = cref.weight * k as u64;
        if k == 0 {
            // No same-class priors: the empty product costs nothing.
            if best.map_or(true, |(b, _)| 0 < b) {
                best = Some((0, ci));
            }
        } else if child.emitted.len() > k {
            let cand = base + child.emitted[k];
            if best.map_or(true, |(b, _)| cand < b) {
                best = Some((cand, ci));
            }
        } else {
            let floor = base + child.emitted.last().copied().unwrap_or(0);
            if stalled_floor.map_or(true, |f| floor < f) {
                stalled_floor = Some(floor);
            }
        }
    }
    match (best, stalled_floor) {
        (Some((v, ci)), None) => Some((v, ci)),
        (Some((v, ci)), Some(floor)) if v <= floor => Some((v, ci)),
        _ => None,
    }
}

fn schedule(nodes: &mut Vec<Node>, needed: usize) -> Result<()> {
    loop {
        let mut progressed = false;
        for id in 0..nodes.len() {
            if nodes[id].done {
                continue;
            }
            while let Some((v, ci)) = next_value(nodes, id, needed) {
                nodes[id].emitted.push(v);
                nodes[id].cursors[ci] += 1;
                progressed = true;
            }
            if nodes[id].emitted.len() >= needed {
                nodes[id].done = true;
            }
        }
        if nodes[ROOT].done {
            return Ok(());
        }
        if !progressed {
            return Err(Error::StreamStalled(
                "no digit class can accept the next element; the description \
                 does not define an infinite closed set"
                    .into(),
            ));
        }
    }
}
