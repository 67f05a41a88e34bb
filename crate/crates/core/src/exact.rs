//! Exact integer and rational matrices derived from a digraph.
//!
//! Every structural decision (normality, the quotient matrix entries) is made
//! here without floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::{IntMatrix, RatMatrix};

pub fn adjacency(g: &Digraph) -> IntMatrix {
    IntMatrix::from_fn(g.n(), g.n(), |u, v| BigInt::from(g.has_arc(u, v) as u8))
}

/// `Δ⁺`, the diagonal matrix of out-degrees.
pub fn out_degree_matrix(g: &Digraph) -> IntMatrix {
    let d: Vec<BigInt> = (0..g.n()).map(|u| BigInt::from(g.out_degree(u))).collect();
    IntMatrix::diagonal(&d)
}

/// The A-Laplacian `L = Δ⁺ − A`. Every row sums to zero.
pub fn laplacian(g: &Digraph) -> IntMatrix {
    &out_degree_matrix(g) - &adjacency(g)
}

pub fn is_normal_laplacian(g: &Digraph) -> bool {
    laplacian(g).is_normal()
}

pub fn is_normal_adjacency(g: &Digraph) -> bool {
    adjacency(g).is_normal()
}

/// Normal Laplacian and normal adjacency matrix.
pub fn is_normal(g: &Digraph) -> bool {
    is_normal_laplacian(g) && is_normal_adjacency(g)
}

/// Combinatorial normality test on common in/out-neighbourhoods.
///
/// For every pair `u ≠ v`, `d⁻(u,v) − d⁺(u,v)` must be `0` when the pair is a
/// digon or a non-adjacency, `d(u) − d(v)` when only `uv` is an arc and
/// `d(v) − d(u)` when only `vu` is, with `d` the out-degree.
pub fn normality_combinatorial(g: &Digraph) -> bool {
    let n = g.n();
    let deg: Vec<i64> = (0..n).map(|u| g.out_degree(u) as i64).collect();
    (0..n).all(|u| {
        (u + 1..n).all(|v| {
            let lhs = g.common_in(u, v).unwrap() as i64 - g.common_out(u, v).unwrap() as i64;
            let rhs = match (g.has_arc(u, v), g.has_arc(v, u)) {
                (true, false) => deg[u] - deg[v],
                (false, true) => deg[v] - deg[u],
                _ => 0,
            };
            lhs == rhs
        })
    })
}

/// Tail and head incidence matrices `(D_t, D_h)`; columns follow
/// [`Digraph::arcs`] order.
pub fn incidence_matrices(g: &Digraph) -> (IntMatrix, IntMatrix) {
    let arcs: Vec<(usize, usize)> = g.arcs().collect();
    let one = |b: bool| BigInt::from(b as u8);
    let tail = IntMatrix::from_fn(g.n(), arcs.len(), |u, e| one(arcs[e].0 == u));
    let head = IntMatrix::from_fn(g.n(), arcs.len(), |u, e| one(arcs[e].1 == u));
    (tail, head)
}

/// Closed form of the 4×4 quotient matrix of the symmetrized perturbed
/// Laplacian under a separation with `|Y| = y`, `|Z| = z`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientProfile {
    /// `Q` with `B = αQ`; rows and columns ordered `Z, V∖Z, V∖Y, Y`.
    pub q: RatMatrix,
    /// `yz / ((n−y)(n−z))`, so that `det B = α⁴ · det_coefficient`.
    pub det_coefficient: BigRational,
}

impl QuotientProfile {
    /// Block sizes of the partition the profile averages over.
    pub fn part_sizes(n: usize, y: usize, z: usize) -> [usize; 4] {
        [z, n - z, n - y, y]
    }
}

pub fn quotient_profile(n: usize, y: usize, z: usize) -> Result<QuotientProfile> {
    if y == 0 || z == 0 || y + z > n {
        return Err(Error::InvalidParameter(format!(
            "need y, z >= 1 and y + z <= n, got n={n}, y={y}, z={z}"
        )));
    }
    let r = |a: usize, b: usize| BigRational::new(BigInt::from(a), BigInt::from(b));
    let a = r(y, n - z);
    let b = r(z, n - y);
    let one = BigRational::one();
    let mut q = RatMatrix::zeros(4, 4);
    q[(0, 2)] = one.clone();
    q[(1, 2)] = &one - &a;
    q[(1, 3)] = a.clone();
    q[(2, 0)] = b.clone();
    q[(2, 1)] = &one - &b;
    q[(3, 1)] = one;
    Ok(QuotientProfile {
        q,
        det_coefficient: a * b,
    })
}

pub fn to_rational(m: &IntMatrix) -> RatMatrix {
    m.map(|x| BigRational::from_integer(x.clone()))
}

/// True when every entry is zero.
pub fn is_zero_matrix<T: Zero>(m: &crate::Matrix<T>) -> bool {
    m.as_slice().iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Matrix;

    fn int(rows: Vec<Vec<i64>>) -> IntMatrix {
        Matrix::from_rows(rows).unwrap().map(|&x| BigInt::from(x))
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn c3() -> Digraph {
        Digraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn laplacians() {
        assert_eq!(
            laplacian(&c3()),
            int(vec![vec![1, -1, 0], vec![0, 1, -1], vec![-1, 0, 1]])
        );
        let k3 = Digraph::from_fn(3, |_, _| true).unwrap();
        assert_eq!(
            laplacian(&k3),
            int(vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]])
        );
        assert_eq!(laplacian(&Digraph::empty(1).unwrap()), int(vec![vec![0]]));
        let path = Digraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(laplacian(&path).row_sums().iter().all(Zero::is_zero));
        assert!(!laplacian(&path).col_sums().iter().all(Zero::is_zero));
    }

    #[test]
    fn normality_on_named_digraphs() {
        assert!(is_normal_laplacian(&c3()) && is_normal_adjacency(&c3()));
        assert!(normality_combinatorial(&c3()));
        let path = Digraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(!is_normal_laplacian(&path) && !is_normal_adjacency(&path));
        let chord = Digraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0), (0, 2)]).unwrap();
        assert!(!normality_combinatorial(&chord));
        assert!(!is_normal_laplacian(&chord));
    }

    #[test]
    fn quotient_profiles() {
        let p = quotient_profile(3, 1, 1).unwrap();
        assert_eq!(p.det_coefficient, rat(1, 4));
        let p = quotient_profile(4, 1, 2).unwrap();
        assert_eq!(p.q[(1, 3)], rat(1, 2));
        assert_eq!(p.q[(2, 0)], rat(2, 3));
        assert_eq!(p.det_coefficient, rat(1, 3));
        assert_eq!(p.q.exact_determinant(), p.det_coefficient);
        let swapped = quotient_profile(4, 2, 1).unwrap();
        assert_eq!(swapped.det_coefficient, p.det_coefficient);
        assert_eq!(swapped.q[(1, 3)], p.q[(2, 0)]);
        assert_eq!(swapped.q[(2, 0)], p.q[(1, 3)]);
        assert!(quotient_profile(3, 0, 1).is_err());
        assert!(quotient_profile(3, 2, 2).is_err());
    }

    #[test]
    fn incidence_of_the_triangle() {
        let (t, h) = incidence_matrices(&c3());
        assert_eq!(&t * &t.transpose(), IntMatrix::identity(3));
        assert_eq!(&t * &h.transpose(), adjacency(&c3()));
        let n = &t - &h;
        let l = laplacian(&c3());
        assert_eq!(&n * &n.transpose(), &l + &l.transpose());
    }
}
