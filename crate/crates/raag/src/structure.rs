//! Cyclic reduction, splitness, powers, root extraction, primitivity and
//! conjugacy of cyclically reduced elements.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::normalform::starting_letters;
use crate::words::{enumerate_geodesic_prefixes, GroupElement};

/// `g = u^{-1} h u` geodesic with `h` of minimum length in the conjugacy
/// class of `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicReduction {
    pub u: GroupElement,
    pub h: GroupElement,
}

/// Minimal length in the conjugacy class, tested as `|g²| = 2|g|`.
pub fn is_cyclically_reduced(g: &GroupElement) -> bool {
    g.pow(2).len() == 2 * g.len()
}

/// Strips conjugating letters until no geodesic decomposition
/// `g = x^{-ε} h x^{ε}` remains. Deterministic: the canonically smallest
/// strippable starting letter goes first.
pub fn cyclically_reduce(g: &GroupElement) -> CyclicReduction {
    let graph = g.graph();
    let mut core = g.clone();
    // g = L h L^{-1} for the accumulated prefix L; u = L^{-1}.
    let mut conj = GroupElement::identity(graph);
    'strip: loop {
        for letter in starting_letters(&core) {
            let l = GroupElement::from_letter(graph, letter);
            let candidate = l.inverse().mul(&core).mul(&l);
            if candidate.len() + 2 == core.len() {
                core = candidate;
                conj = conj.mul(&l);
                continue 'strip;
            }
        }
        break;
    }
    CyclicReduction {
        u: conj.inverse(),
        h: core,
    }
}

/// Whether `supp(g)` spans a connected induced subgraph. The identity is
/// non-split (empty support is connected by convention).
pub fn is_non_split(g: &GroupElement) -> bool {
    g.graph().induced_subgraph_connected(&g.support())
}

/// Non-split, nontrivial, and no generator outside the support commutes
/// with all of it.
pub fn is_strongly_non_split(g: &GroupElement) -> bool {
    if g.is_identity() || !is_non_split(g) {
        return false;
    }
    let graph = g.graph();
    let supp = g.support();
    !graph
        .vertices()
        .any(|v| !supp.contains(&v) && supp.iter().all(|&s| graph.commutes(v, s)))
}

/// `gⁿ`. For cyclically reduced `g` this is geodesic: `|gⁿ| = n|g|`.
pub fn power(g: &GroupElement, n: usize) -> GroupElement {
    g.pow(n)
}

/// All `g` with `gⁿ = m`, for `n ≥ 2` and `m` cyclically reduced.
///
/// Any root of a geodesic `n`-th power is cyclically reduced, so a
/// non-cyclically-reduced `m` (or `|m|` not divisible by `n`) has no
/// roots and yields the empty set. The identity has exactly the trivial
/// root.
pub fn extract_nth_roots(m: &GroupElement, n: usize, cap: usize) -> Result<Vec<GroupElement>> {
    if n < 2 {
        return Err(Error::Precondition(format!("root degree {n} < 2")));
    }
    if m.is_identity() {
        return Ok(vec![GroupElement::identity(m.graph())]);
    }
    if m.len() % n != 0 || !is_cyclically_reduced(m) {
        return Ok(Vec::new());
    }
    let d = m.len() / n;
    let mut roots = Vec::new();
    for u in enumerate_geodesic_prefixes(m, d, cap)? {
        if u.pow(n) == *m {
            roots.push(u);
        }
    }
    Ok(roots)
}

/// Whether `g` is not a nontrivial power. Conjugation-invariant, so the
/// check runs on the cyclically reduced core.
pub fn is_primitive(g: &GroupElement, cap: usize) -> Result<bool> {
    if g.is_identity() {
        return Err(Error::Precondition(
            "primitivity is undefined for the identity".into(),
        ));
    }
    let core = cyclically_reduce(g).h;
    let len = core.len();
    for d in 1..len {
        if len % d != 0 {
            continue;
        }
        if !extract_nth_roots(&core, len / d, cap)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Closure of `{g}` under the cyclic move `(g = g1·g2 geodesic) ↦ g2·g1`,
/// taking every geodesic split at every length.
pub fn cyclic_conjugates(g: &GroupElement, cap: usize) -> Result<BTreeSet<GroupElement>> {
    let mut seen = BTreeSet::from([g.clone()]);
    let mut frontier = vec![g.clone()];
    while let Some(e) = frontier.pop() {
        for d in 1..e.len() {
            for u in enumerate_geodesic_prefixes(&e, d, cap)? {
                let rest = u.inverse().mul(&e);
                let rotated = rest.mul(&u);
                if seen.insert(rotated.clone()) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded(seen.len()));
                    }
                    frontier.push(rotated);
                }
            }
        }
    }
    Ok(seen)
}

/// Conjugacy test for cyclically reduced elements: `h2` must appear in the
/// cyclic-conjugate closure of `h1`.
pub fn are_conjugate_cyclically_reduced(
    h1: &GroupElement,
    h2: &GroupElement,
    cap: usize,
) -> Result<bool> {
    if !h1.same_graph(h2) {
        return Err(Error::GraphMismatch);
    }
    for (label, h) in [("h1", h1), ("h2", h2)] {
        if !is_cyclically_reduced(h) {
            return Err(Error::Precondition(format!(
                "{label} must be cyclically reduced"
            )));
        }
    }
    if h1.len() != h2.len() {
        return Ok(false);
    }
    Ok(cyclic_conjugates(h1, cap)?.contains(h2))
}
