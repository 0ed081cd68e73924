//! Defining graphs and vertex orders.
//!
//! The defining graph `Γ` is finite and simple. In the convention used
//! throughout this crate two distinct generators commute exactly when they
//! are **not** adjacent in `Γ`. A vertex never commutes with itself as a
//! letter; this is what the cancellation logic in [`crate::words`] relies on.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Index of a vertex inside its [`DefiningGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite simple graph with named vertices.
///
/// The order in which vertices were declared doubles as the default
/// [`VertexOrder`]; normal forms computed without an explicit order use it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningGraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    adj: Vec<Vec<bool>>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl DefiningGraph {
    /// Builds a graph from vertex names and edges given by name pairs.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut g = DefiningGraph {
            names: Vec::new(),
            index: HashMap::new(),
            adj: Vec::new(),
        };
        for v in vertices {
            g.add_vertex(v.as_ref(), 0)?;
        }
        for (a, b) in edges {
            g.add_edge(a.as_ref(), b.as_ref(), 0)?;
        }
        Ok(g)
    }

    /// The path graph on `n` vertices named `v1 .. vn`.
    pub fn path(n: usize) -> Self {
        let vertices: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
        let edges: Vec<(String, String)> = (1..n)
            .map(|i| (format!("v{i}"), format!("v{}", i + 1)))
            .collect();
        Self::new(&vertices, &edges).expect("path graph is always valid")
    }

    fn add_vertex(&mut self, name: &str, line: usize) -> Result<()> {
        if !valid_name(name) {
            return Err(Error::Parse {
                line,
                msg: format!("invalid vertex name `{name}`"),
            });
        }
        if self.index.contains_key(name) {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate vertex `{name}`"),
            });
        }
        let id = VertexId(self.names.len() as u32);
        self.index.insert(name.to_owned(), id);
        self.names.push(name.to_owned());
        for row in &mut self.adj {
            row.push(false);
        }
        self.adj.push(vec![false; self.names.len()]);
        Ok(())
    }

    fn add_edge(&mut self, a: &str, b: &str, line: usize) -> Result<()> {
        let ia = *self.index.get(a).ok_or(Error::Parse {
            line,
            msg: format!("unknown endpoint `{a}`"),
        })?;
        let ib = *self.index.get(b).ok_or(Error::Parse {
            line,
            msg: format!("unknown endpoint `{b}`"),
        })?;
        if ia == ib {
            return Err(Error::Parse {
                line,
                msg: format!("loop edge `{a}-{b}`"),
            });
        }
        self.adj[ia.index()][ib.index()] = true;
        self.adj[ib.index()][ia.index()] = true;
        Ok(())
    }

    /// Parses the graph file format:
    ///
    /// ```text
    /// # comment
    /// vertices: v1 v2 v3
    /// edges: v1-v2 v2-v3
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut g = DefiningGraph {
            names: Vec::new(),
            index: HashMap::new(),
            adj: Vec::new(),
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix("vertices:") {
                for name in rest.split_whitespace() {
                    g.add_vertex(name, line)?;
                }
            } else if let Some(rest) = content.strip_prefix("edges:") {
                for pair in rest.split_whitespace() {
                    let (a, b) = pair.split_once('-').ok_or(Error::Parse {
                        line,
                        msg: format!("malformed edge `{pair}`"),
                    })?;
                    g.add_edge(a, b, line)?;
                }
            } else {
                return Err(Error::Parse {
                    line,
                    msg: format!("malformed line `{content}`"),
                });
            }
        }
        Ok(g)
    }

    /// Serializes the graph so that `parse(serialize(g)) == g`.
    pub fn serialize(&self) -> String {
        let mut out = String::from("vertices:");
        for name in &self.names {
            let _ = write!(out, " {name}");
        }
        out.push_str("\nedges:");
        for i in 0..self.names.len() {
            for j in (i + 1)..self.names.len() {
                if self.adj[i][j] {
                    let _ = write!(out, " {}-{}", self.names[i], self.names[j]);
                }
            }
        }
        out.push('\n');
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.names[v.index()]
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_owned()))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.names.len() as u32).map(VertexId)
    }

    #[inline]
    pub fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.adj[a.index()][b.index()]
    }

    /// Whether the generators `a` and `b` commute in `G(Γ)`.
    ///
    /// A vertex never commutes with itself: as letters, `v` and `v^{-1}`
    /// are dependent, which the cancellation semantics require.
    #[inline]
    pub fn commutes(&self, a: VertexId, b: VertexId) -> bool {
        a != b && !self.adjacent(a, b)
    }

    /// Name-level variant of [`commutes`](Self::commutes).
    pub fn commutes_named(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.commutes(self.vertex(a)?, self.vertex(b)?))
    }

    pub fn is_connected(&self) -> bool {
        let all: BTreeSet<VertexId> = self.vertices().collect();
        self.induced_subgraph_connected(&all)
    }

    /// Connectivity of the subgraph induced by `set`. The empty set is
    /// connected by convention.
    pub fn induced_subgraph_connected(&self, set: &BTreeSet<VertexId>) -> bool {
        let Some(&start) = set.iter().next() else {
            return true;
        };
        let mut seen = BTreeSet::new();
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in set {
                if !seen.contains(&w) && self.adjacent(v, w) {
                    seen.insert(w);
                    queue.push_back(w);
                }
            }
        }
        seen.len() == set.len()
    }

    /// The declaration order of the vertices.
    pub fn default_order(&self) -> VertexOrder {
        VertexOrder {
            rank: (0..self.names.len() as u32).collect(),
        }
    }
}

/// A linear order on `V(Γ)`, the parameter of normal forms and the
/// SD-conical predicate.
///
/// The order extends to letters so that each generator immediately precedes
/// its inverse: `v1 < v1^{-1} < v2 < v2^{-1} < ...`; see
/// [`letter_key`](Self::letter_key).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexOrder {
    /// `rank[v] = position of v`, 0 = smallest.
    rank: Vec<u32>,
}

impl VertexOrder {
    /// Builds an order from a permutation of all vertex names.
    pub fn from_names<S: AsRef<str>>(graph: &DefiningGraph, names: &[S]) -> Result<Self> {
        if names.len() != graph.vertex_count() {
            return Err(Error::Precondition(format!(
                "order lists {} vertices, graph has {}",
                names.len(),
                graph.vertex_count()
            )));
        }
        let mut rank = vec![u32::MAX; graph.vertex_count()];
        for (pos, name) in names.iter().enumerate() {
            let v = graph.vertex(name.as_ref())?;
            if rank[v.index()] != u32::MAX {
                return Err(Error::Precondition(format!(
                    "vertex `{}` listed twice in order",
                    name.as_ref()
                )));
            }
            rank[v.index()] = pos as u32;
        }
        Ok(VertexOrder { rank })
    }

    /// Default order with `v0` moved to the front.
    pub fn with_first(graph: &DefiningGraph, v0: VertexId) -> Self {
        Self::with_front(graph, &[v0])
    }

    /// Default order with the listed vertices moved to the front, in the
    /// given order.
    pub fn with_front(graph: &DefiningGraph, front: &[VertexId]) -> Self {
        let mut rank = vec![u32::MAX; graph.vertex_count()];
        let mut next = 0u32;
        for &v in front {
            if rank[v.index()] == u32::MAX {
                rank[v.index()] = next;
                next += 1;
            }
        }
        for v in 0..graph.vertex_count() {
            if rank[v] == u32::MAX {
                rank[v] = next;
                next += 1;
            }
        }
        VertexOrder { rank }
    }

    #[inline]
    pub fn rank(&self, v: VertexId) -> u32 {
        self.rank[v.index()]
    }

    /// Key of a letter under the extended order (`v` immediately precedes
    /// `v^{-1}`). Larger key = larger letter.
    #[inline]
    pub fn letter_key(&self, vertex: VertexId, inverse: bool) -> u32 {
        2 * self.rank(vertex) + inverse as u32
    }

    pub fn min_of<'a, I: IntoIterator<Item = &'a VertexId>>(&self, set: I) -> Option<VertexId> {
        set.into_iter().copied().min_by_key(|&v| self.rank(v))
    }
}
