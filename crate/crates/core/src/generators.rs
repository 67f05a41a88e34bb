//! Witness families: abelian Cayley digraphs, rotational tournaments, random
//! unions of cycles and bidirected graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};

/// The generator behind every seeded construction, as reported in outputs.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3, seed_from_u64)";

/// Attempts allowed per cycle before [`random_eulerian`] gives up.
pub const RETRY_CAP: usize = 1000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Z_{n₁} × … × Z_{n_k}` with a connection set of nonzero elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupSpec {
    orders: Vec<usize>,
    connection: Vec<Vec<usize>>,
}

impl AbelianGroupSpec {
    /// Reduces every coordinate modulo its order and rejects the identity and
    /// repeated elements.
    pub fn new(orders: Vec<usize>, connection: &[Vec<i64>]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::InvalidParameter(
                "cycle orders must be positive".into(),
            ));
        }
        let mut reduced = Vec::with_capacity(connection.len());
        for c in connection {
            if c.len() != orders.len() {
                return Err(Error::InvalidParameter(format!(
                    "element {c:?} has {} coordinates, group has {}",
                    c.len(),
                    orders.len()
                )));
            }
            let r: Vec<usize> = c
                .iter()
                .zip(&orders)
                .map(|(&x, &m)| x.rem_euclid(m as i64) as usize)
                .collect();
            if r.iter().all(|&x| x == 0) {
                return Err(Error::InvalidParameter(format!(
                    "{c:?} is the identity and would create loops"
                )));
            }
            if reduced.contains(&r) {
                return Err(Error::InvalidParameter(format!("{c:?} repeats an element")));
            }
            reduced.push(r);
        }
        Ok(AbelianGroupSpec {
            orders,
            connection: reduced,
        })
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn connection(&self) -> &[Vec<usize>] {
        &self.connection
    }

    pub fn group_order(&self) -> usize {
        self.orders.iter().product()
    }

    /// Mixed-radix index, first coordinate most significant.
    pub fn index_of(&self, element: &[usize]) -> usize {
        element
            .iter()
            .zip(&self.orders)
            .fold(0, |acc, (&x, &m)| acc * m + x)
    }

    pub fn element(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.orders.len()];
        for (slot, &m) in out.iter_mut().zip(&self.orders).rev() {
            *slot = index % m;
            index /= m;
        }
        out
    }

    fn add(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        a.iter()
            .zip(b)
            .zip(&self.orders)
            .map(|((&x, &y), &m)| (x + y) % m)
            .collect()
    }
}

/// `Cay(G, C)`: vertex `g` (in mixed-radix order) has arcs to `g + c`.
pub fn cayley_abelian(spec: &AbelianGroupSpec) -> Result<Digraph> {
    let n = spec.group_order();
    let mut arcs = Vec::with_capacity(n * spec.connection.len());
    for u in 0..n {
        let g = spec.element(u);
        for c in &spec.connection {
            arcs.push((u, spec.index_of(&spec.add(&g, c))));
        }
    }
    Digraph::from_arcs(n, &arcs)
}

/// Every abelian group of order `n` in invariant-factor form
/// `n₁ | n₂ | … | n_k`; the trivial group is `[1]`.
pub fn abelian_groups(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, min: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            out.push(prefix.clone());
            return;
        }
        for d in min.max(2)..=rest {
            if rest.is_multiple_of(d) && prefix.last().is_none_or(|&p| d % p == 0) {
                prefix.push(d);
                go(rest / d, d, prefix, out);
                prefix.pop();
            }
        }
    }
    if n <= 1 {
        return vec![vec![1]];
    }
    let mut out = Vec::new();
    go(n, 2, &mut Vec::new(), &mut out);
    out
}

/// Each nonidentity element joins the connection set independently with
/// probability one half.
pub fn random_connection_set(orders: &[usize], rng: &mut impl Rng) -> Result<AbelianGroupSpec> {
    let probe = AbelianGroupSpec::new(orders.to_vec(), &[])?;
    let connection: Vec<Vec<i64>> = (1..probe.group_order())
        .filter(|_| rng.gen_bool(0.5))
        .map(|i| probe.element(i).into_iter().map(|x| x as i64).collect())
        .collect();
    AbelianGroupSpec::new(orders.to_vec(), &connection)
}

/// Circulant tournament on `Z_n` with arcs `i → i + s` for `s ∈ S`; needs
/// `S ⊔ (−S) = Z_n ∖ {0}`.
pub fn rotational_tournament(n: usize, s: &[i64]) -> Result<Digraph> {
    if n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "tournament order {n} is not odd"
        )));
    }
    let m = n as i64;
    let mut set: Vec<usize> = s.iter().map(|&x| x.rem_euclid(m) as usize).collect();
    set.sort_unstable();
    set.dedup();
    let mut seen = vec![false; n];
    for &x in &set {
        let neg = (n - x) % n;
        if x == 0 || seen[x] || seen[neg] {
            return Err(Error::InvalidParameter(format!(
                "{s:?} is not a tournament connection set mod {n}"
            )));
        }
        seen[x] = true;
    }
    if 2 * set.len() != n - 1 {
        return Err(Error::InvalidParameter(format!(
            "{s:?} has {} classes, a tournament on {n} vertices needs {}",
            set.len(),
            (n - 1) / 2
        )));
    }
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| set.iter().map(move |&x| (i, (i + x) % n)))
        .collect();
    Digraph::from_arcs(n, &arcs)
}

/// Union of `cycles` random directed cycles (length 2 to `n`, on random
/// vertices). A cycle that would repeat an arc is redrawn, at most
/// [`RETRY_CAP`] times.
pub fn random_eulerian(n: usize, cycles: usize, seed: u64) -> Result<Digraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    let mut rng = rng(seed);
    let mut g = Digraph::empty(n)?;
    let mut vertices: Vec<usize> = (0..n).collect();
    for _ in 0..cycles {
        let mut placed = false;
        for _ in 0..RETRY_CAP {
            let len = rng.gen_range(2..=n);
            vertices.shuffle(&mut rng);
            let cycle = &vertices[..len];
            let arcs: Vec<(usize, usize)> =
                (0..len).map(|i| (cycle[i], cycle[(i + 1) % len])).collect();
            if arcs.iter().all(|&(u, v)| !g.has_arc(u, v)) {
                let mut all: Vec<(usize, usize)> = g.arcs().collect();
                all.extend(arcs);
                g = Digraph::from_arcs(n, &all)?;
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::RetryLimit(RETRY_CAP));
        }
    }
    Ok(g)
}

/// Each undirected edge becomes a digon.
pub fn bidirected_from_graph(n: usize, edges: &[(usize, usize)]) -> Result<Digraph> {
    let arcs: Vec<(usize, usize)> = edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect();
    Digraph::from_arcs(n, &arcs)
}

/// `G(n, p)` as a bidirected digraph.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Result<Digraph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    bidirected_from_graph(n, &edges)
}

/// Every ordered pair is an arc independently with probability `p`.
pub fn random_digraph(n: usize, p: f64, rng: &mut impl Rng) -> Result<Digraph> {
    Digraph::from_fn(n, |_, _| rng.gen_bool(p))
}

/// `0 → 1 → … → n−1 → 0`
pub fn directed_cycle(n: usize) -> Result<Digraph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "a directed cycle needs n >= 2, got {n}"
        )));
    }
    let arcs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Digraph::from_arcs(n, &arcs)
}

/// Bidirected complete graph.
pub fn complete(n: usize) -> Result<Digraph> {
    Digraph::from_fn(n, |_, _| true)
}
