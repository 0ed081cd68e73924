//! Letters, words, reduction and the element calculus of `G(Γ)`.
//!
//! A [`Word`] is an arbitrary finite sequence of letters; a
//! [`GroupElement`] is the reduction-equivalence class of a word,
//! canonicalized to its canonical normal form under the graph's default vertex
//! order, so that element equality is plain representative equality.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{DefiningGraph, VertexId, VertexOrder};

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub vertex: VertexId,
    pub inverse: bool,
}

impl Letter {
    pub fn new(vertex: VertexId, inverse: bool) -> Self {
        Letter { vertex, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            vertex: self.vertex,
            inverse: !self.inverse,
        }
    }

    fn display(self, graph: &DefiningGraph) -> String {
        if self.inverse {
            format!("{}^-1", graph.vertex_name(self.vertex))
        } else {
            graph.vertex_name(self.vertex).to_owned()
        }
    }
}

/// A finite, possibly non-reduced sequence of letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    /// Parses whitespace-separated tokens like `v2 v3^-1`. Empty input is
    /// the empty word.
    pub fn parse(graph: &DefiningGraph, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let (name, inverse) = match token.strip_suffix("^-1") {
                Some(name) => (name, true),
                None => (token, false),
            };
            letters.push(Letter::new(graph.vertex(name)?, inverse));
        }
        Ok(Word { letters })
    }

    /// Token serialization; mirrors [`parse`](Self::parse).
    pub fn display(&self, graph: &DefiningGraph) -> String {
        self.letters
            .iter()
            .map(|l| l.display(graph))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// The free inverse: reverse the sequence and flip every sign.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }
}

/// Finds the leftmost-then-shortest innermost cancellation of `w`:
/// positions `i < j` with `w[i] = v^{±1}`, `w[j] = v^{∓1}`, every letter
/// strictly between commuting with `v` and none equal to `v^{±1}`.
///
/// Returns `None` exactly when `w` is reduced.
pub fn find_innermost_cancellation(graph: &DefiningGraph, w: &Word) -> Option<(usize, usize)> {
    let letters = w.letters();
    for i in 0..letters.len() {
        let x = letters[i];
        for (j, &y) in letters.iter().enumerate().skip(i + 1) {
            if y.vertex == x.vertex {
                if y.inverse != x.inverse {
                    return Some((i, j));
                }
                break;
            }
            if !graph.commutes(x.vertex, y.vertex) {
                break;
            }
        }
    }
    None
}

/// Deterministic reduction: repeatedly delete the pair found by
/// [`find_innermost_cancellation`] until none exists. Letters in between
/// stay in place, so `|w| - |out|` is even.
pub fn reduce(graph: &DefiningGraph, w: &Word) -> Word {
    let mut letters = w.letters().to_vec();
    while let Some((i, j)) = find_innermost_cancellation(graph, &Word::new(letters.clone())) {
        letters.remove(j);
        letters.remove(i);
    }
    Word::new(letters)
}

/// Appends `x` to the reduced buffer `buf`, cancelling against an inverse
/// letter reachable through commuting letters. Keeps `buf` reduced.
pub(crate) fn push_reduced(graph: &DefiningGraph, buf: &mut Vec<Letter>, x: Letter) {
    let mut k = buf.len();
    while k > 0 {
        let y = buf[k - 1];
        if y.vertex == x.vertex {
            if y.inverse != x.inverse {
                buf.remove(k - 1);
                return;
            }
            break;
        }
        if !graph.commutes(x.vertex, y.vertex) {
            break;
        }
        k -= 1;
    }
    buf.push(x);
}

/// Stack-based reduction; agrees with [`reduce`] up to commutation moves
/// (same group element, linear-ish time).
pub(crate) fn reduce_stack(graph: &DefiningGraph, letters: &[Letter]) -> Vec<Letter> {
    let mut buf = Vec::with_capacity(letters.len());
    for &x in letters {
        push_reduced(graph, &mut buf, x);
    }
    buf
}

/// Rewrites a reduced word into the unique normal word of its element
/// under `order`: a greedy topological sort of the dependence DAG picking
/// the largest available starting generator at every step.
pub(crate) fn normal_word(graph: &DefiningGraph, reduced: &[Letter], order: &VertexOrder) -> Vec<Letter> {
    let n = reduced.len();
    let mut succs: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut indeg = vec![0u32; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if !graph.commutes(reduced[i].vertex, reduced[j].vertex) {
                succs[i].push(j as u32);
                indeg[j] += 1;
            }
        }
    }
    // Two available positions never share a vertex (same-vertex letters
    // are dependent), so ranking by vertex alone is unambiguous and the
    // sign of the chosen letter is forced.
    let mut heap: std::collections::BinaryHeap<(u32, u32)> = (0..n)
        .filter(|&i| indeg[i] == 0)
        .map(|i| (order.rank(reduced[i].vertex), i as u32))
        .collect();
    let mut out = Vec::with_capacity(n);
    while let Some((_, i)) = heap.pop() {
        let i = i as usize;
        out.push(reduced[i]);
        for &j in &succs[i] {
            let j = j as usize;
            indeg[j] -= 1;
            if indeg[j] == 0 {
                heap.push((order.rank(reduced[j].vertex), j as u32));
            }
        }
    }
    debug_assert_eq!(out.len(), n);
    out
}

/// The dependence DAG of a reduced word: one node per letter position,
/// an edge `i -> j` (`i < j`) iff letters `i` and `j` do not commute
/// (same-vertex letters always depend on each other).
///
/// Downward-closed position sets are exactly the geodesic prefixes.
#[derive(Debug, Clone)]
pub struct DependenceDag {
    /// `preds[j]` lists every `i < j` with an edge `i -> j`.
    pub preds: Vec<Vec<u32>>,
}

impl DependenceDag {
    pub fn of(graph: &DefiningGraph, letters: &[Letter]) -> Self {
        let n = letters.len();
        let mut preds = vec![Vec::new(); n];
        for j in 0..n {
            for i in 0..j {
                if !graph.commutes(letters[i].vertex, letters[j].vertex) {
                    preds[j].push(i as u32);
                }
            }
        }
        DependenceDag { preds }
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    /// Positions with no predecessor; their letters are the possible first
    /// letters of reduced words for the element.
    pub fn minimal_positions(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.preds[j].is_empty()).collect()
    }
}

/// An element of `G(Γ)`: an immutable canonical reduced representative
/// plus a shared handle to its graph.
#[derive(Debug, Clone)]
pub struct GroupElement {
    graph: Arc<DefiningGraph>,
    rep: Word,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_graph(other) && self.rep == other.rep
    }
}

impl Eq for GroupElement {}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    /// Canonical order: by length, then by representative letters.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.rep.len(), self.rep.letters()).cmp(&(other.rep.len(), other.rep.letters()))
    }
}

impl std::hash::Hash for GroupElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rep.hash(state);
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rep.display(&self.graph))
    }
}

impl GroupElement {
    pub fn identity(graph: &Arc<DefiningGraph>) -> Self {
        GroupElement {
            graph: Arc::clone(graph),
            rep: Word::empty(),
        }
    }

    /// Canonical element of an arbitrary word: reduce, then normalize
    /// under the graph's default order.
    pub fn from_word(graph: &Arc<DefiningGraph>, w: &Word) -> Self {
        let reduced = reduce_stack(graph, w.letters());
        let rep = normal_word(graph, &reduced, &graph.default_order());
        GroupElement {
            graph: Arc::clone(graph),
            rep: Word::new(rep),
        }
    }

    pub fn parse(graph: &Arc<DefiningGraph>, text: &str) -> Result<Self> {
        Ok(Self::from_word(graph, &Word::parse(graph, text)?))
    }

    pub fn from_letter(graph: &Arc<DefiningGraph>, letter: Letter) -> Self {
        Self::from_word(graph, &Word::new(vec![letter]))
    }

    pub fn graph(&self) -> &Arc<DefiningGraph> {
        &self.graph
    }

    pub fn same_graph(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.graph, &other.graph) || self.graph == other.graph
    }

    /// The canonical reduced representative (canonical normal form under the
    /// default order).
    pub fn word(&self) -> &Word {
        &self.rep
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_identity(&self) -> bool {
        self.rep.is_empty()
    }

    pub fn support(&self) -> BTreeSet<VertexId> {
        self.rep.letters().iter().map(|l| l.vertex).collect()
    }

    pub fn inverse(&self) -> Self {
        Self::from_word(&self.graph, &self.rep.inverse())
    }

    /// Product. Panics if the graphs differ; see [`checked_mul`](Self::checked_mul).
    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.same_graph(other), "graph mismatch");
        let mut buf = self.rep.letters().to_vec();
        for &x in other.rep.letters() {
            push_reduced(&self.graph, &mut buf, x);
        }
        let rep = normal_word(&self.graph, &buf, &self.graph.default_order());
        GroupElement {
            graph: Arc::clone(&self.graph),
            rep: Word::new(rep),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if !self.same_graph(other) {
            return Err(Error::GraphMismatch);
        }
        Ok(self.mul(other))
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut buf = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            for &x in self.rep.letters() {
                push_reduced(&self.graph, &mut buf, x);
            }
        }
        let rep = normal_word(&self.graph, &buf, &self.graph.default_order());
        GroupElement {
            graph: Arc::clone(&self.graph),
            rep: Word::new(rep),
        }
    }

    /// Equality with a graph-mismatch check. In debug builds the
    /// normal-form comparison is cross-checked against free reduction of
    /// `g1 · g2^{-1}`.
    pub fn equal(&self, other: &Self) -> Result<bool> {
        if !self.same_graph(other) {
            return Err(Error::GraphMismatch);
        }
        let by_rep = self.rep == other.rep;
        debug_assert_eq!(
            by_rep,
            reduce_stack(
                &self.graph,
                &self.rep.concat(&other.rep.inverse()).letters().to_vec()
            )
            .is_empty(),
            "normal-form equality and free-reduction equality disagree"
        );
        Ok(by_rep)
    }

    /// Disjoint commutation: disjoint supports and every cross pair
    /// commutes.
    pub fn disjointly_commute(&self, other: &Self) -> Result<bool> {
        if !self.same_graph(other) {
            return Err(Error::GraphMismatch);
        }
        let s1 = self.support();
        let s2 = other.support();
        if s1.intersection(&s2).next().is_some() {
            return Ok(false);
        }
        Ok(s1
            .iter()
            .all(|&a| s2.iter().all(|&b| self.graph.commutes(a, b))))
    }

    pub fn dependence_dag(&self) -> DependenceDag {
        DependenceDag::of(&self.graph, self.rep.letters())
    }

    /// Element spanned by a set of positions of the canonical
    /// representative, read in increasing position order.
    pub(crate) fn sub_element(&self, positions: &[usize]) -> Self {
        let letters: Vec<Letter> = positions.iter().map(|&i| self.rep.letters()[i]).collect();
        Self::from_word(&self.graph, &Word::new(letters))
    }

    pub fn to_token_string(&self) -> String {
        self.rep.display(&self.graph)
    }
}

/// True iff multiplying the parts loses no length.
pub fn is_geodesic(parts: &[GroupElement]) -> Result<bool> {
    let Some(first) = parts.first() else {
        return Ok(true);
    };
    let mut product = first.clone();
    let mut total = first.len();
    for part in &parts[1..] {
        product = product.checked_mul(part)?;
        total += part.len();
    }
    Ok(product.len() == total)
}

/// Geodesic prefixes of `g` of every size `0 ..= dmax`: `out[d]` is the
/// canonically sorted set `{u : g = u·v geodesic, |u| = d}`.
///
/// Prefixes correspond to downward-closed position sets of the dependence
/// DAG; the DFS adds positions in increasing index order, which visits
/// every ideal exactly once. Fails with [`Error::CapExceeded`] after
/// visiting more than `cap` sets.
pub fn enumerate_geodesic_prefixes_up_to(
    g: &GroupElement,
    dmax: usize,
    cap: usize,
) -> Result<Vec<Vec<GroupElement>>> {
    let dag = g.dependence_dag();
    let n = dag.len();
    let dmax = dmax.min(n);
    let mut out: Vec<Vec<GroupElement>> = vec![Vec::new(); dmax + 1];
    let mut chosen: Vec<usize> = Vec::with_capacity(dmax);
    let mut in_set = vec![false; n];
    let mut visited = 0usize;

    // Iterative DFS: stack of candidate start positions per depth.
    struct Frame {
        next: usize,
    }
    let mut frames = vec![Frame { next: 0 }];
    out[0].push(GroupElement::identity(g.graph()));
    visited += 1;
    loop {
        let depth = frames.len() - 1;
        let frame_next = frames[depth].next;
        if depth == dmax || frame_next >= n {
            if frames.len() == 1 {
                break;
            }
            frames.pop();
            let p = chosen.pop().expect("chosen tracks frames");
            in_set[p] = false;
            continue;
        }
        frames[depth].next += 1;
        let p = frame_next;
        if in_set[p] {
            continue;
        }
        // all chosen positions are < p only when scanning forward from the
        // last pick; enforce increasing order
        if let Some(&last) = chosen.last() {
            if p <= last {
                continue;
            }
        }
        if !dag.preds[p].iter().all(|&q| in_set[q as usize]) {
            continue;
        }
        chosen.push(p);
        in_set[p] = true;
        visited += 1;
        if visited > cap {
            return Err(Error::CapExceeded(visited));
        }
        out[chosen.len()].push(g.sub_element(&chosen));
        frames.push(Frame { next: p + 1 });
    }

    for level in &mut out {
        level.sort_unstable();
        level.dedup();
    }
    Ok(out)
}

/// Geodesic prefixes of exactly size `d`.
pub fn enumerate_geodesic_prefixes(
    g: &GroupElement,
    d: usize,
    cap: usize,
) -> Result<Vec<GroupElement>> {
    if d > g.len() {
        return Err(Error::Precondition(format!(
            "prefix size {d} exceeds |g| = {}",
            g.len()
        )));
    }
    let mut levels = enumerate_geodesic_prefixes_up_to(g, d, cap)?;
    Ok(levels.swap_remove(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p5() -> Arc<DefiningGraph> {
        Arc::new(DefiningGraph::path(5))
    }

    fn w(g: &Arc<DefiningGraph>, s: &str) -> Word {
        Word::parse(g, s).unwrap()
    }

    fn e(g: &Arc<DefiningGraph>, s: &str) -> GroupElement {
        GroupElement::parse(g, s).unwrap()
    }

    #[test]
    fn word_inverse() {
        let g = p5();
        assert_eq!(w(&g, "v2 v3^-1").inverse(), w(&g, "v3 v2^-1"));
        assert_eq!(Word::empty().inverse(), Word::empty());
    }

    #[test]
    fn word_parse_display_round_trip() {
        let g = p5();
        for s in ["", "v2", "v2 v3^-1 v5 v5"] {
            assert_eq!(w(&g, s).display(&g), s);
        }
        assert!(matches!(Word::parse(&g, "v9"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn innermost_cancellation_examples() {
        let g = p5();
        assert_eq!(
            find_innermost_cancellation(&g, &w(&g, "v2 v2^-1")),
            Some((0, 1))
        );
        // v1 and v3 commute, so the cancellation spans position 1
        assert_eq!(
            find_innermost_cancellation(&g, &w(&g, "v1 v3 v1^-1")),
            Some((0, 2))
        );
        // v2 and v3 do not commute
        assert_eq!(find_innermost_cancellation(&g, &w(&g, "v2 v3 v2^-1")), None);
    }

    #[test]
    fn reduce_examples() {
        let g = p5();
        assert_eq!(reduce(&g, &w(&g, "v1 v1 v2 v2^-1")), w(&g, "v1 v1"));
        assert_eq!(reduce(&g, &Word::empty()), Word::empty());
        assert_eq!(reduce(&g, &w(&g, "v1 v3 v1^-1 v4")), w(&g, "v3 v4"));
    }

    #[test]
    fn reduce_and_stack_reduction_agree_as_elements() {
        let g = p5();
        for s in [
            "v1 v3 v1^-1 v4",
            "v2 v2^-1 v3 v4 v4^-1",
            "v5 v1 v5^-1 v1^-1",
            "v2 v3 v2^-1 v3^-1",
        ] {
            let word = w(&g, s);
            let a = GroupElement::from_word(&g, &reduce(&g, &word));
            let b = GroupElement::from_word(&g, &word);
            assert_eq!(a, b, "{s}");
        }
    }

    #[test]
    fn element_support_and_length() {
        let g = p5();
        let g1 = e(&g, "v2 v3 v5^-1 v5^-1");
        let names: Vec<&str> = g1.support().iter().map(|&v| g.vertex_name(v)).collect();
        assert_eq!(names, ["v2", "v3", "v5"]);
        assert_eq!(g1.len(), 4);

        let id = GroupElement::identity(&g);
        assert!(id.support().is_empty());
        assert_eq!(id.len(), 0);

        let cancel = e(&g, "v1 v3 v1^-1");
        assert_eq!(cancel.len(), 1);
        assert_eq!(cancel, e(&g, "v3"));
    }

    #[test]
    fn equality_examples() {
        let g = p5();
        assert!(e(&g, "v2 v4^-1 v3^-1 v5")
            .equal(&e(&g, "v4^-1 v5 v2 v3^-1"))
            .unwrap());
        assert!(!e(&g, "v2").equal(&e(&g, "v3")).unwrap());
        let other = Arc::new(DefiningGraph::path(3));
        assert!(matches!(
            e(&g, "v2").equal(&e(&other, "v2")),
            Err(Error::GraphMismatch)
        ));
    }

    #[test]
    fn disjoint_commutation_examples() {
        let g = p5();
        assert!(e(&g, "v5").disjointly_commute(&e(&g, "v2 v3")).unwrap());
        assert!(!e(&g, "v4").disjointly_commute(&e(&g, "v2 v3 v4")).unwrap());
    }

    #[test]
    fn geodesic_examples() {
        let g = p5();
        assert!(is_geodesic(&[e(&g, "v1"), e(&g, "v1")]).unwrap());
        assert!(!is_geodesic(&[e(&g, "v2"), e(&g, "v2^-1")]).unwrap());
        assert!(is_geodesic(&[]).unwrap());
    }

    #[test]
    fn prefix_enumeration_extremes() {
        let g = p5();
        let x = e(&g, "v2 v3 v4");
        assert_eq!(
            enumerate_geodesic_prefixes(&x, 0, 1000).unwrap(),
            vec![GroupElement::identity(&g)]
        );
        assert_eq!(
            enumerate_geodesic_prefixes(&x, 3, 1000).unwrap(),
            vec![x.clone()]
        );
    }

    #[test]
    fn prefix_enumeration_commuting_first_letters() {
        let g = p5();
        let x = e(&g, "v1 v3");
        let ones = enumerate_geodesic_prefixes(&x, 1, 1000).unwrap();
        assert_eq!(ones, vec![e(&g, "v1"), e(&g, "v3")]);
    }

    #[test]
    fn prefix_enumeration_dependent_first_letters() {
        let g = p5();
        let x = e(&g, "v2 v3");
        let ones = enumerate_geodesic_prefixes(&x, 1, 1000).unwrap();
        assert_eq!(ones, vec![e(&g, "v2")]);
    }

    #[test]
    fn prefix_cap_exceeded() {
        let g = p5();
        // v1, v3, v5 pairwise commute: the DAG is an antichain of width 3
        let x = e(&g, "v1 v3 v5");
        assert!(matches!(
            enumerate_geodesic_prefixes_up_to(&x, 3, 3),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn prefixes_are_geodesic_factors() {
        let g = p5();
        let x = e(&g, "v2 v1 v3 v4 v2^-1");
        for d in 0..=x.len() {
            for u in enumerate_geodesic_prefixes(&x, d, 100_000).unwrap() {
                assert_eq!(u.len(), d);
                let v = u.inverse().mul(&x);
                assert!(is_geodesic(&[u, v]).unwrap());
            }
        }
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let g = p5();
        let x = e(&g, "v2 v3 v2^-1");
        let mut acc = GroupElement::identity(&g);
        for n in 0..5 {
            assert_eq!(x.pow(n), acc);
            acc = acc.mul(&x);
        }
    }
}
