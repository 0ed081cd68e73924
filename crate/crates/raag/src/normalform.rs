//! Starting generators, conical classification, canonical normal forms and the
//! conical-conjugate procedure.
//!
//! The canonical normal form `σ(g)` is the unique normal representative word of
//! `g` under a vertex order: every suffix starts with the largest starting
//! generator of the element it represents. Equivalently, `σ(g)` is the
//! lexicographically largest reduced word for `g` under the extended order
//! where each generator immediately precedes its inverse.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, VertexId, VertexOrder};
use crate::words::{normal_word, DependenceDag, GroupElement, Letter, Word};

/// The possible first letters of reduced words for `g`, canonically sorted.
pub fn starting_letters(g: &GroupElement) -> Vec<Letter> {
    let dag = g.dependence_dag();
    let letters = g.word().letters();
    let mut out: Vec<Letter> = dag
        .minimal_positions()
        .into_iter()
        .map(|i| letters[i])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `S(g)`: the set of generators starting some reduced word for `g`.
/// Empty exactly for the identity.
pub fn starting_generators(g: &GroupElement) -> BTreeSet<VertexId> {
    starting_letters(g).into_iter().map(|l| l.vertex).collect()
}

/// Whether `S(g)` is a singleton.
pub fn is_conical(g: &GroupElement) -> bool {
    starting_generators(g).len() == 1
}

/// The unique starting generator of a conical element.
pub fn apex(g: &GroupElement) -> Result<VertexId> {
    let s = starting_generators(g);
    if s.len() == 1 {
        Ok(*s.iter().next().expect("singleton"))
    } else {
        Err(Error::Precondition(format!(
            "apex requires a conical element, |S(g)| = {}",
            s.len()
        )))
    }
}

/// Conical with the apex minimal in `supp(g)` under `order`.
pub fn is_pyramidal(g: &GroupElement, order: &VertexOrder) -> bool {
    match apex(g) {
        Ok(a) => order.min_of(&g.support()) == Some(a),
        Err(_) => false,
    }
}

/// Conical with the apex adjacent to (hence not commuting with) every
/// strictly smaller generator: "smaller vertex dominating".
pub fn is_sd_conical(g: &GroupElement, order: &VertexOrder) -> bool {
    let Ok(a) = apex(g) else {
        return false;
    };
    let graph = g.graph();
    graph
        .vertices()
        .filter(|&v| order.rank(v) < order.rank(a))
        .all(|v| graph.adjacent(v, a))
}

/// The canonical normal form `σ(g)` under `order`.
pub fn normal_form(g: &GroupElement, order: &VertexOrder) -> Word {
    Word::new(normal_word(g.graph(), g.word().letters(), order))
}

/// Whether `w` is reduced and every suffix is initially normal under
/// `order`.
pub fn is_normal_word(graph: &DefiningGraph, w: &Word, order: &VertexOrder) -> bool {
    if crate::words::find_innermost_cancellation(graph, w).is_some() {
        return false;
    }
    let letters = w.letters();
    // A suffix of a reduced word is reduced; its dependence DAG is the
    // induced sub-DAG, so starting generators come from minimal positions.
    for start in 0..letters.len() {
        let suffix = &letters[start..];
        let dag = DependenceDag::of(graph, suffix);
        let largest = dag
            .minimal_positions()
            .into_iter()
            .map(|i| suffix[i].vertex)
            .max_by_key(|&v| order.rank(v))
            .expect("nonempty suffix has a minimal position");
        if suffix[0].vertex != largest {
            return false;
        }
    }
    true
}

/// The unique geodesic decomposition `h = t·p` with `p` `v`-conical and
/// `v ∉ supp(t)`.
///
/// `p` spans the upward closure of the first `v^{±1}` occurrence in the
/// dependence DAG of the canonical representative; `t` spans the
/// complementary downward-closed set.
pub fn tail_conical_decomposition(
    h: &GroupElement,
    v: VertexId,
) -> Result<(GroupElement, GroupElement)> {
    if !crate::structure::is_non_split(h) {
        return Err(Error::Precondition(
            "tail decomposition requires a non-split element".into(),
        ));
    }
    if !h.support().contains(&v) {
        return Err(Error::Precondition(format!(
            "vertex `{}` not in the support",
            h.graph().vertex_name(v)
        )));
    }
    let letters = h.word().letters();
    let graph = h.graph();
    let first = letters
        .iter()
        .position(|l| l.vertex == v)
        .expect("v is in the support");
    let mut upward = vec![false; letters.len()];
    upward[first] = true;
    for j in (first + 1)..letters.len() {
        upward[j] = (first..j)
            .any(|i| upward[i] && !graph.commutes(letters[i].vertex, letters[j].vertex));
    }
    let (p_pos, t_pos): (Vec<usize>, Vec<usize>) = (0..letters.len()).partition(|&i| upward[i]);
    let p = h.sub_element(&p_pos);
    let t = h.sub_element(&t_pos);
    debug_assert_eq!(apex(&p), Ok(v));
    debug_assert!(!t.support().contains(&v));
    debug_assert_eq!(t.mul(&p), *h);
    Ok((t, p))
}

/// Output of [`conical_conjugate`]: `g = a p a^{-1} = b^{-1} p b` with `p`
/// the `v0`-conical conjugate and `g^k = a·b` geodesic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConicalConjugateResult {
    pub p: GroupElement,
    pub a: GroupElement,
    pub b: GroupElement,
    pub k: usize,
    pub v0: VertexId,
}

impl ConicalConjugateResult {
    /// Checks every invariant against the input `g`; returns the list of
    /// violated invariants (empty when all hold).
    pub fn violated_invariants(&self, g: &GroupElement) -> Vec<String> {
        let mut bad = Vec::new();
        let vcount = g.graph().vertex_count();
        if self.k >= vcount && !(self.k == 0 && vcount == 0) {
            bad.push(format!("k = {} exceeds |V| - 1 = {}", self.k, vcount - 1));
        }
        if self.p.len() != g.len() {
            bad.push("|p| != |g|".into());
        }
        if apex(&self.p) != Ok(self.v0) {
            bad.push("p is not v0-conical".into());
        }
        if self.a.mul(&self.p).mul(&self.a.inverse()) != *g {
            bad.push("g != a p a^-1".into());
        }
        if self.b.inverse().mul(&self.p).mul(&self.b) != *g {
            bad.push("g != b^-1 p b".into());
        }
        let gk = g.pow(self.k);
        if self.a.mul(&self.b) != gk {
            bad.push("g^k != a b".into());
        }
        if self.a.len() + self.b.len() != gk.len() {
            bad.push("g^k = a b is not geodesic".into());
        }
        bad
    }
}

/// The iterative conical-conjugation procedure: split `g_i = t_i · p_i` at
/// `v0`, rotate to `g_{i+1} = p_i t_i`, and stop at the first `v0`-conical
/// iterate. Terminates within `|V(Γ)| - 1` steps.
pub fn conical_conjugate(g: &GroupElement, v0: VertexId) -> Result<ConicalConjugateResult> {
    if !crate::structure::is_non_split(g) {
        return Err(Error::Precondition(
            "conical conjugation requires a non-split element".into(),
        ));
    }
    if !crate::structure::is_cyclically_reduced(g) {
        return Err(Error::Precondition(
            "conical conjugation requires a cyclically reduced element".into(),
        ));
    }
    if !g.support().contains(&v0) {
        return Err(Error::Precondition(format!(
            "vertex `{}` not in the support",
            g.graph().vertex_name(v0)
        )));
    }
    let vcount = g.graph().vertex_count();
    let mut current = g.clone();
    let mut tails: Vec<GroupElement> = Vec::new();
    let mut heads: Vec<GroupElement> = Vec::new();
    for k in 0..vcount {
        if apex(&current) == Ok(v0) {
            let a = tails
                .iter()
                .fold(GroupElement::identity(g.graph()), |acc, t| acc.mul(t));
            let b = heads
                .iter()
                .rev()
                .fold(GroupElement::identity(g.graph()), |acc, p| acc.mul(p));
            return Ok(ConicalConjugateResult {
                p: current,
                a,
                b,
                k,
                v0,
            });
        }
        let (t, p) = tail_conical_decomposition(&current, v0)?;
        current = p.mul(&t);
        tails.push(t);
        heads.push(p);
    }
    unreachable!("conical conjugation did not terminate within |V|-1 steps");
}

/// Chooses a vertex order making both conical conjugates SD-conical:
/// a shared support vertex goes first if one exists, otherwise the least
/// adjacent cross pair `(v1, v2)` goes first and second. Ties broken by
/// the default order.
pub fn choose_order_for_pair(
    g1: &GroupElement,
    g2: &GroupElement,
) -> Result<(VertexOrder, VertexId, VertexId)> {
    if !g1.same_graph(g2) {
        return Err(Error::GraphMismatch);
    }
    for (label, g) in [("g1", g1), ("g2", g2)] {
        if !crate::structure::is_strongly_non_split(g) {
            return Err(Error::Precondition(format!(
                "{label} must be strongly non-split"
            )));
        }
        if !crate::structure::is_cyclically_reduced(g) {
            return Err(Error::Precondition(format!(
                "{label} must be cyclically reduced"
            )));
        }
    }
    let graph = g1.graph();
    let s1 = g1.support();
    let s2 = g2.support();
    let common: Vec<VertexId> = s1.intersection(&s2).copied().collect();
    if let Some(&v0) = common.first() {
        return Ok((VertexOrder::with_first(graph, v0), v0, v0));
    }
    for &v1 in &s1 {
        for &v2 in &s2 {
            if graph.adjacent(v1, v2) {
                return Ok((VertexOrder::with_front(graph, &[v1, v2]), v1, v2));
            }
        }
    }
    // No edge across disjoint supports would make every vertex of supp(g2)
    // disjointly commute with g1, contradicting strong non-splitness.
    unreachable!("strongly non-split elements always admit a cross edge");
}
