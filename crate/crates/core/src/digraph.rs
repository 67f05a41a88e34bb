//! Loop-free digraphs on vertices `0..n` with a dense arc relation.
//!
//! A digon (both `uv` and `vu`) stands for an undirected edge; there is no
//! separate edge type.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of vertices stored as a bit vector (a single word when `n <= 64`).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct VertexSet {
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Set from a bitmask over vertices `0..64`.
    pub fn from_mask(mask: u64) -> Self {
        VertexSet { words: vec![mask] }
    }

    pub fn insert(&mut self, v: usize) {
        let (w, b) = (v / 64, v % 64);
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << b;
    }

    pub fn contains(&self, v: usize) -> bool {
        self.words
            .get(v / 64)
            .is_some_and(|w| w & (1 << (v % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64)
                .filter(move |b| w & (1 << b) != 0)
                .map(move |b| i * 64 + b)
        })
    }

    /// The vertices of `0..n` not in this set.
    pub fn complement(&self, n: usize) -> VertexSet {
        (0..n).filter(|&v| !self.contains(v)).collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Digraph with `n >= 1` vertices, no loops and no parallel arcs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    adj: Vec<bool>,
}

impl Digraph {
    /// Arcless digraph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        Ok(Digraph {
            n,
            adj: vec![false; n * n],
        })
    }

    /// Digraph with exactly the listed arcs. Duplicates collapse.
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut g = Digraph::empty(n)?;
        for &(u, v) in arcs {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::Loop(u));
            }
            g.adj[u * n + v] = true;
        }
        Ok(g)
    }

    /// Build from a predicate on ordered pairs; the diagonal is ignored.
    pub fn from_fn(n: usize, mut arc: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut g = Digraph::empty(n)?;
        for u in 0..n {
            for v in 0..n {
                g.adj[u * n + v] = u != v && arc(u, v);
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    /// Arcs in row-major order (by tail, then head).
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            (0..self.n)
                .filter(move |&v| self.has_arc(u, v))
                .map(move |v| (u, v))
        })
    }

    pub fn arc_count(&self) -> usize {
        self.adj.iter().filter(|&&a| a).count()
    }

    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_arc(u, v))
    }

    pub fn in_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.has_arc(u, v))
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_neighbors(u).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_neighbors(v).count()
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::SameVertex(u));
        }
        Ok(())
    }

    /// `|{w : uw, vw ∈ E}|`
    pub fn common_out(&self, u: usize, v: usize) -> Result<usize> {
        self.check_pair(u, v)?;
        Ok((0..self.n)
            .filter(|&w| self.has_arc(u, w) && self.has_arc(v, w))
            .count())
    }

    /// `|{w : wu, wv ∈ E}|`
    pub fn common_in(&self, u: usize, v: usize) -> Result<usize> {
        self.check_pair(u, v)?;
        Ok((0..self.n)
            .filter(|&w| self.has_arc(w, u) && self.has_arc(w, v))
            .count())
    }

    /// Weak components, each sorted, ordered by smallest vertex.
    pub fn weak_components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut comp = vec![s];
            label[s] = id;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for (w, lw) in label.iter_mut().enumerate() {
                    if *lw == usize::MAX && (self.has_arc(u, w) || self.has_arc(w, u)) {
                        *lw = id;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_weakly_connected(&self) -> bool {
        self.weak_components().len() == 1
    }

    fn reach(&self, start: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for (w, sw) in seen.iter_mut().enumerate() {
                let arc = if forward {
                    self.has_arc(u, w)
                } else {
                    self.has_arc(w, u)
                };
                if arc && !*sw {
                    *sw = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.reach(0, true).iter().all(|&s| s) && self.reach(0, false).iter().all(|&s| s)
    }

    /// In-degree equals out-degree at every vertex.
    pub fn is_balanced(&self) -> bool {
        (0..self.n).all(|u| self.in_degree(u) == self.out_degree(u))
    }

    /// Weakly connected and balanced.
    pub fn is_eulerian(&self) -> bool {
        self.is_weakly_connected() && self.is_balanced()
    }

    /// Has a closed trail through every arc: balanced, and all arcs lie in a
    /// single weak component (isolated vertices allowed, arcless included).
    pub fn has_euler_circuit(&self) -> bool {
        self.is_balanced()
            && self
                .weak_components()
                .iter()
                .filter(|c| c.len() > 1)
                .count()
                <= 1
    }

    /// All out-degrees equal and all in-degrees equal.
    pub fn is_regular(&self) -> bool {
        let d = self.out_degree(0);
        (0..self.n).all(|u| self.out_degree(u) == d && self.in_degree(u) == d)
    }

    /// Symmetric arc relation.
    pub fn is_undirected(&self) -> bool {
        self.arcs().all(|(u, v)| self.has_arc(v, u))
    }

    /// Exactly one arc between every pair of distinct vertices.
    pub fn is_tournament(&self) -> bool {
        (0..self.n).all(|u| (u + 1..self.n).all(|v| self.has_arc(u, v) != self.has_arc(v, u)))
    }

    /// `Y`, `Z` nonempty and disjoint with no arc from `Z` into `Y`.
    pub fn is_separation(&self, y: &VertexSet, z: &VertexSet) -> bool {
        let in_range = |s: &VertexSet| s.iter().all(|v| v < self.n);
        !y.is_empty()
            && !z.is_empty()
            && in_range(y)
            && in_range(z)
            && y.is_disjoint(z)
            && z.iter().all(|u| y.iter().all(|v| !self.has_arc(u, v)))
    }

    /// Relabel so that vertex `u` becomes `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Digraph> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n
            || perm
                .iter()
                .any(|&p| p >= self.n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidParameter("not a permutation".into()));
        }
        let mut g = Digraph::empty(self.n)?;
        for (u, v) in self.arcs() {
            g.adj[perm[u] * self.n + perm[v]] = true;
        }
        Ok(g)
    }

    /// Every arc reversed.
    pub fn reverse(&self) -> Digraph {
        let mut g = self.clone();
        for u in 0..self.n {
            for v in 0..self.n {
                g.adj[u * self.n + v] = self.has_arc(v, u);
            }
        }
        g
    }

    /// Disjoint union; `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Digraph) -> Digraph {
        let n = self.n + other.n;
        let mut g = Digraph {
            n,
            adj: vec![false; n * n],
        };
        for (u, v) in self.arcs() {
            g.adj[u * n + v] = true;
        }
        for (u, v) in other.arcs() {
            g.adj[(u + self.n) * n + v + self.n] = true;
        }
        g
    }

    /// Parse the `n m` header plus `m` arc lines text format. Lines whose
    /// first non-blank character is `#` and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Digraph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `n m` header".into(),
        })?;
        let [n, m] = parse_pair(hline, header)?;
        if n == 0 {
            return Err(Error::Parse {
                line: hline,
                msg: "vertex count must be positive".into(),
            });
        }
        let mut arcs = Vec::with_capacity(m);
        for (line, l) in lines.by_ref() {
            if arcs.len() == m {
                return Err(Error::Parse {
                    line,
                    msg: format!("more than the {m} declared arcs"),
                });
            }
            let [u, v] = parse_pair(line, l)?;
            if u >= n || v >= n {
                return Err(Error::Parse {
                    line,
                    msg: format!("vertex out of range for {n} vertices"),
                });
            }
            if u == v {
                return Err(Error::Parse {
                    line,
                    msg: format!("loop at vertex {u}"),
                });
            }
            arcs.push((u, v));
        }
        if arcs.len() != m {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                msg: format!("expected {m} arcs, found {}", arcs.len()),
            });
        }
        Digraph::from_arcs(n, &arcs)
    }

    /// Serialize in the text format, arcs in row-major order.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.arc_count());
        for (u, v) in self.arcs() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2]> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse {
            line,
            msg: format!("expected two integers, got {:?}", text),
        });
    }
    let mut out = [0; 2];
    for (slot, f) in out.iter_mut().zip(&fields) {
        *slot = f.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("not a nonnegative integer: {f:?}"),
        })?;
    }
    Ok(out)
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Digraph(n={}, arcs={:?})",
            self.n,
            self.arcs().collect::<Vec<_>>()
        )
    }
}

/// Disjoint nonempty vertex sets `Y`, `Z` with no arc from `Z` into `Y`.
/// `W = V ∖ (Y ∪ Z)` is implied.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Separation {
    pub y: VertexSet,
    pub z: VertexSet,
}

impl Separation {
    pub fn new(g: &Digraph, y: VertexSet, z: VertexSet) -> Result<Self> {
        if !g.is_separation(&y, &z) {
            return Err(Error::InvalidParameter(format!(
                "({y:?}, {z:?}) is not a separation"
            )));
        }
        Ok(Separation { y, z })
    }
}
