//! Brute-force and exact cross-checks of the bound and of each identity its
//! proof rests on.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, Separation, VertexSet};
use crate::eig::{self, ComplexSpectrum};
use crate::error::{Error, NotApplicable, Result};
use crate::exact::{self, QuotientProfile};
use crate::matrix::Matrix;
use crate::scalar::{Real, Tolerances};
use crate::spectral::{self, BoundReport};
use crate::RatMatrix;

/// Largest order [`all_separations`] scans (`3ⁿ` assignments).
pub const MAX_SCAN: usize = 15;

/// Absolute slack granted to the right-hand side in every bound comparison.
pub const BOUND_SLACK: f64 = 1e-8;

/// Absolute tolerance of the singular value and eigenvalue comparisons.
pub const CHECK_TOL: f64 = 1e-8;

/// Every separation `(Y, Z)` of `g`, each once, from the ternary assignment
/// of each vertex to `W`, `Y` or `Z` (vertex 0 least significant).
pub fn all_separations(g: &Digraph) -> Result<impl Iterator<Item = Separation> + '_> {
    let n = g.n();
    if n > MAX_SCAN {
        return Err(Error::TooLarge { n, max: MAX_SCAN });
    }
    let out: Vec<u32> = (0..n)
        .map(|u| g.out_neighbors(u).fold(0, |m, v| m | 1 << v))
        .collect();
    Ok((0..3u32.pow(n as u32)).filter_map(move |mut code| {
        let (mut y, mut z) = (0u32, 0u32);
        for v in 0..n {
            match code % 3 {
                1 => y |= 1 << v,
                2 => z |= 1 << v,
                _ => {}
            }
            code /= 3;
        }
        let ok = y != 0 && z != 0 && (0..n).all(|v| z >> v & 1 == 0 || out[v] & y == 0);
        ok.then(|| Separation {
            y: VertexSet::from_mask(y as u64),
            z: VertexSet::from_mask(z as u64),
        })
    }))
}

/// `yz / ((n−y)(n−z))`
pub fn separation_lhs(n: usize, y: usize, z: usize) -> BigRational {
    BigRational::new(BigInt::from(y * z), BigInt::from((n - y) * (n - z)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationScan {
    pub n: usize,
    pub count: u64,
    /// A separation attaining the maximum, if any separation exists.
    pub witness: Option<Separation>,
}

impl SeparationScan {
    /// Largest left-hand side; zero when there is no separation.
    pub fn best_lhs(&self) -> BigRational {
        self.witness.as_ref().map_or_else(BigRational::zero, |w| {
            separation_lhs(self.n, w.y.len(), w.z.len())
        })
    }

    pub fn best_lhs_real<F: Real>(&self) -> F {
        self.witness.as_ref().map_or_else(F::zero, |w| {
            let (n, y, z) = (self.n, w.y.len(), w.z.len());
            F::from_usize(y * z).unwrap() / F::from_usize((n - y) * (n - z)).unwrap()
        })
    }
}

/// The separation maximizing the left-hand side, compared exactly.
pub fn max_separation_lhs(g: &Digraph) -> Result<SeparationScan> {
    let n = g.n();
    let mut count = 0;
    let mut best: Option<(Separation, (usize, usize))> = None;
    for sep in all_separations(g)? {
        count += 1;
        let (y, z) = (sep.y.len(), sep.z.len());
        let better = best.as_ref().is_none_or(|(_, (by, bz))| {
            // yz(n−by)(n−bz) > by·bz(n−y)(n−z)
            y * z * (n - by) * (n - bz) > by * bz * (n - y) * (n - z)
        });
        if better {
            best = Some((sep, (y, z)));
        }
    }
    Ok(SeparationScan {
        n,
        count,
        witness: best.map(|b| b.0),
    })
}

/// Bound report with the brute-force left-hand side attached.
pub fn verify_bound<F: Real>(
    g: &Digraph,
    tol: &Tolerances<F>,
) -> Result<(BoundReport<F>, SeparationScan)> {
    let mut report = spectral::separation_bound(g, tol)?;
    let scan = max_separation_lhs(g)?;
    report.attach_lhs(
        scan.best_lhs_real(),
        scan.witness.clone(),
        F::lit(BOUND_SLACK),
    );
    Ok((report, scan))
}

fn sorted_desc<F: Real>(mut v: Vec<F>) -> Vec<F> {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

fn max_gap<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .fold(F::zero(), |m, (&x, &y)| m.max((x - y).abs()))
}

/// `αI + L`
pub fn perturbed<F: Real>(l: &Matrix<F>, alpha: F) -> Matrix<F> {
    l + &Matrix::identity(l.rows()).scale(&alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularCheck<F> {
    /// `|α + λ|` over the spectrum, descending.
    pub predicted: Vec<F>,
    /// Singular values of `αI + L`, descending.
    pub computed: Vec<F>,
    pub max_error: F,
    pub holds: bool,
}

/// Compares `{|α + λ|}` with the singular values of `αI + L`.
pub fn singular_perturbation_check<F: Real>(
    l: &Matrix<F>,
    spectrum: &ComplexSpectrum<F>,
    alpha: F,
    tol: &Tolerances<F>,
) -> Result<SingularCheck<F>> {
    let shift = Complex::new(alpha, F::zero());
    let predicted = sorted_desc(
        spectrum
            .eigenvalues()
            .iter()
            .map(|z| (z + shift).norm())
            .collect(),
    );
    let computed = eig::singular_values(&perturbed(l, alpha), tol.tol)?;
    if predicted.len() != computed.len() {
        return Err(Error::Dimension("spectrum and matrix orders differ".into()));
    }
    let max_error = max_gap(&predicted, &computed);
    Ok(SingularCheck {
        holds: max_error <= F::lit(CHECK_TOL),
        predicted,
        computed,
        max_error,
    })
}

/// [`singular_perturbation_check`] after computing the spectrum of `L`,
/// which rejects non-normal input.
pub fn verify_singular_perturbation<F: Real>(
    l: &Matrix<F>,
    alpha: F,
    tol: &Tolerances<F>,
) -> Result<SingularCheck<F>> {
    let spectrum = eig::normal_spectrum(l, tol)?;
    singular_perturbation_check(l, &spectrum, alpha, tol)
}

/// `[[0, M], [Mᵀ, 0]]`
pub fn block_symmetrization<F: Real>(m: &Matrix<F>) -> Matrix<F> {
    let z = Matrix::zeros(m.rows(), m.rows());
    Matrix::block(&z, m, &m.transpose(), &z).expect("square blocks")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockCheck<F> {
    /// Eigenvalues of the symmetrization, descending.
    pub eigenvalues: Vec<F>,
    /// `±σ` for the singular values of `αI + L`, descending.
    pub predicted: Vec<F>,
    pub max_error: F,
    /// `λ_{2n} = −λ₁` and `λ_{2n−1} = −λ₂`.
    pub mirrored: bool,
    pub holds: bool,
}

pub fn verify_block_symmetrization<F: Real>(
    l: &Matrix<F>,
    alpha: F,
    tol: &Tolerances<F>,
) -> Result<BlockCheck<F>> {
    let m = perturbed(l, alpha);
    let c = block_symmetrization(&m);
    let eigenvalues = sorted_desc(eig::sym_eigen(&c, tol.tol)?.values);
    let sigma = eig::singular_values(&m, tol.tol)?;
    let predicted = sorted_desc(sigma.iter().flat_map(|&s| [s, -s]).collect());
    let max_error = max_gap(&eigenvalues, &predicted);
    let eps = F::lit(CHECK_TOL);
    let k = eigenvalues.len();
    let mirrored = (0..k.min(2)).all(|i| (eigenvalues[k - 1 - i] + eigenvalues[i]).abs() <= eps);
    Ok(BlockCheck {
        holds: max_error <= eps && mirrored,
        eigenvalues,
        predicted,
        max_error,
        mirrored,
    })
}

/// Index sets `Z, V∖Z, V∖Y, Y` of the symmetrization, the last two shifted
/// into the second copy of `V`.
fn lifted_parts(n: usize, sep: &Separation) -> [Vec<usize>; 4] {
    let first = |keep: &dyn Fn(usize) -> bool| (0..n).filter(|&v| keep(v)).collect::<Vec<_>>();
    let second = |keep: &dyn Fn(usize) -> bool| {
        (0..n)
            .filter(|&v| keep(v))
            .map(|v| v + n)
            .collect::<Vec<_>>()
    };
    [
        first(&|v| sep.z.contains(v)),
        first(&|v| !sep.z.contains(v)),
        second(&|v| !sep.y.contains(v)),
        second(&|v| sep.y.contains(v)),
    ]
}

/// Average row sums of the blocks of `m` under `parts`.
fn block_averages<T: Clone + num_traits::Num>(
    m: &Matrix<T>,
    parts: &[Vec<usize>; 4],
    size: impl Fn(usize) -> T,
) -> Matrix<T> {
    Matrix::from_fn(4, 4, |i, j| {
        let mut s = T::zero();
        for &r in &parts[i] {
            for &c in &parts[j] {
                s = s + m[(r, c)].clone();
            }
        }
        s / size(parts[i].len())
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientCheck<F> {
    /// `B = α·Q` as an identity in `α`, checked in rational arithmetic.
    pub exact_match: bool,
    /// Largest entry of `|B − αQ|` with `B` averaged in floating point.
    pub numeric_error: F,
    pub det: F,
    /// `α⁴ yz / ((n−y)(n−z))`
    pub det_expected: F,
    /// Two largest eigenvalues of the symmetrization.
    pub lambda: [F; 2],
    /// Eigenvalues of the symmetrized quotient, descending.
    pub mu: [F; 4],
    /// `λ₁ ≥ μ₁` and `λ₂ ≥ μ₂`.
    pub interlacing: bool,
    /// `(μ₁μ₂)² ≤ (λ₁λ₂)²`
    pub product_inequality: bool,
}

impl<F: Real> QuotientCheck<F> {
    pub fn holds(&self) -> bool {
        let eps = F::lit(CHECK_TOL);
        self.exact_match
            && self.numeric_error <= eps
            && (self.det - self.det_expected).abs() <= eps
            && self.interlacing
            && self.product_inequality
    }
}

/// Quotient of the symmetrized `αI + L` under `{Z, V∖Z} × {V∖Y, Y}`.
///
/// Needs every row and column sum of `L` to vanish, i.e. a balanced digraph.
pub fn verify_quotient<F: Real>(
    g: &Digraph,
    sep: &Separation,
    alpha: F,
    tol: &Tolerances<F>,
) -> Result<QuotientCheck<F>> {
    if !g.is_balanced() {
        return Err(Error::NotApplicable(NotApplicable::NotNormal {
            balanced: false,
        }));
    }
    if !g.is_separation(&sep.y, &sep.z) {
        return Err(Error::InvalidParameter(format!(
            "{sep:?} is not a separation"
        )));
    }
    let n = g.n();
    let (y, z) = (sep.y.len(), sep.z.len());
    let QuotientProfile { q, det_coefficient } = exact::quotient_profile(n, y, z)?;
    let parts = lifted_parts(n, sep);

    let l = exact::to_rational(&exact::laplacian(g));
    let id = RatMatrix::identity(n);
    let rat = |k: usize| BigRational::from_integer(BigInt::from(k));
    let b_l = block_averages(&block_symmetrization_exact(&l), &parts, rat);
    let b_i = block_averages(&block_symmetrization_exact(&id), &parts, rat);
    let exact_match = exact::is_zero_matrix(&b_l) && b_i == q;

    let lf = spectral::real_laplacian::<F>(g);
    let c = block_symmetrization(&perturbed(&lf, alpha));
    let b = block_averages(&c, &parts, |k| F::from_usize(k).unwrap());
    let q_real = q.map(|x| rational_to_real::<F>(x));
    let numeric_error = b.max_abs_diff(&q_real.scale(&alpha));
    let det = b.determinant();
    let det_expected = alpha.powi(4) * rational_to_real::<F>(&det_coefficient);

    let sizes = QuotientProfile::part_sizes(n, y, z).map(|k| F::from_usize(k).unwrap().sqrt());
    let sym = Matrix::from_fn(4, 4, |i, j| b[(i, j)] * sizes[i] / sizes[j]);
    let sym = Matrix::from_fn(4, 4, |i, j| (sym[(i, j)] + sym[(j, i)]) / F::lit(2.0));
    let mu_all = sorted_desc(eig::sym_eigen(&sym, tol.tol)?.values);
    let lambda_all = sorted_desc(eig::sym_eigen(&c, tol.tol)?.values);
    let eps = F::lit(CHECK_TOL);
    let lambda = [lambda_all[0], lambda_all[1]];
    let mu = [mu_all[0], mu_all[1], mu_all[2], mu_all[3]];
    let interlacing = lambda[0] >= mu[0] - eps && lambda[1] >= mu[1] - eps;
    let lhs = (mu[0] * mu[1]).powi(2);
    let rhs = (lambda[0] * lambda[1]).powi(2);
    Ok(QuotientCheck {
        exact_match,
        numeric_error,
        det,
        det_expected,
        lambda,
        mu,
        interlacing,
        product_inequality: lhs <= rhs + eps * rhs.max(F::one()),
    })
}

fn block_symmetrization_exact(m: &RatMatrix) -> RatMatrix {
    let z = RatMatrix::zeros(m.rows(), m.rows());
    Matrix::block(&z, m, &m.transpose(), &z).expect("square blocks")
}

fn rational_to_real<F: Real>(x: &BigRational) -> F {
    use num_traits::ToPrimitive;
    F::from_f64(x.to_f64().expect("finite")).unwrap()
}

/// `(D_t − D_h)(D_t − D_h)ᵀ = L + Lᵀ` in integers. The left side is
/// `Δ⁺ + Δ⁻ − A − Aᵀ`, so this holds exactly for balanced digraphs.
pub fn incidence_identity(g: &Digraph) -> bool {
    let (t, h) = exact::incidence_matrices(g);
    let n = &t - &h;
    let l = exact::laplacian(g);
    &n * &n.transpose() == &l + &l.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn c3() -> Digraph {
        Digraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn sep(y: &[usize], z: &[usize]) -> Separation {
        Separation {
            y: set(y),
            z: set(z),
        }
    }

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    #[test]
    fn triangle_separations() {
        let mut seps: Vec<Separation> = all_separations(&c3()).unwrap().collect();
        seps.sort_by_key(|s| (s.y.iter().next(), s.z.iter().next()));
        assert_eq!(
            seps,
            vec![sep(&[0], &[1]), sep(&[1], &[2]), sep(&[2], &[0])]
        );
        let k3 = generators::complete(3).unwrap();
        assert_eq!(all_separations(&k3).unwrap().count(), 0);
        let arc = Digraph::from_arcs(2, &[(0, 1)]).unwrap();
        assert_eq!(
            all_separations(&arc).unwrap().collect::<Vec<_>>(),
            vec![sep(&[0], &[1])]
        );
        assert!(all_separations(&Digraph::empty(16).unwrap()).is_err());
    }

    #[test]
    fn scans() {
        let s = max_separation_lhs(&c3()).unwrap();
        assert_eq!(
            (s.count, s.best_lhs()),
            (3, BigRational::new(1.into(), 4.into()))
        );
        let t5 = generators::rotational_tournament(5, &[1, 2]).unwrap();
        let s = max_separation_lhs(&t5).unwrap();
        assert_eq!(s.best_lhs(), BigRational::new(1.into(), 6.into()));
        let w = s.witness.unwrap();
        assert!(t5.is_separation(&w.y, &w.z));
        let k3 = max_separation_lhs(&generators::complete(3).unwrap()).unwrap();
        assert_eq!((k3.count, k3.best_lhs()), (0, BigRational::zero()));
    }

    #[test]
    fn bound_on_the_triangle_is_tight() {
        let (report, _) = verify_bound::<f64>(&c3(), &tol()).unwrap();
        assert_eq!(report.verdict, Some(spectral::Verdict::Holds));
        assert!((report.rhs - report.lhs_max.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn singular_values_of_the_shifted_triangle() {
        let l = spectral::real_laplacian::<f64>(&c3());
        let check = verify_singular_perturbation(&l, -2.0, &tol()).unwrap();
        assert!(check.holds);
        let expected = [2.0, 1.0, 1.0];
        assert!(check
            .computed
            .iter()
            .zip(expected)
            .all(|(a, b)| (a - b).abs() < 1e-12));
        let at_zero = verify_singular_perturbation(&l, 0.0, &tol()).unwrap();
        assert!(at_zero.holds && at_zero.computed[2].abs() < 1e-12);
        let jordan = Matrix::from_rows(vec![vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(verify_singular_perturbation(&jordan, -1.0, &tol()).is_err());
    }

    #[test]
    fn block_symmetrizations() {
        let l = spectral::real_laplacian::<f64>(&c3());
        let check = verify_block_symmetrization(&l, -2.0, &tol()).unwrap();
        assert!(check.holds);
        let expected = [2.0, 1.0, 1.0, -1.0, -1.0, -2.0];
        assert!(check
            .eigenvalues
            .iter()
            .zip(expected)
            .all(|(a, b)| (a - b).abs() < 1e-12));
        let one = spectral::real_laplacian::<f64>(&Digraph::empty(1).unwrap());
        let check = verify_block_symmetrization(&one, -1.0, &tol()).unwrap();
        assert!(check.holds);
        assert!(
            (check.eigenvalues[0] - 1.0).abs() < 1e-12
                && (check.eigenvalues[1] + 1.0).abs() < 1e-12
        );
    }

    #[test]
    fn quotients() {
        let check = verify_quotient(&c3(), &sep(&[2], &[0]), -2.0, &tol()).unwrap();
        assert!(check.exact_match && check.holds());
        assert!((check.det - 4.0).abs() < 1e-12);
        let t5 = generators::rotational_tournament(5, &[1, 2]).unwrap();
        let check = verify_quotient(&t5, &sep(&[0], &[1, 2]), -3.0, &tol()).unwrap();
        assert!(check.holds());
        assert!((check.det - 13.5).abs() < 1e-10);
        let path = Digraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(verify_quotient(&path, &sep(&[0], &[2]), -1.0, &tol()).is_err());
        assert!(verify_quotient(&c3(), &sep(&[0], &[2]), -1.0, &tol()).is_err());
    }

    #[test]
    fn incidence() {
        assert!(incidence_identity(&c3()));
        assert!(incidence_identity(&Digraph::empty(3).unwrap()));
        let mut rng = generators::rng(5);
        for _ in 0..50 {
            let g = generators::random_digraph(6, 0.4, &mut rng).unwrap();
            assert_eq!(incidence_identity(&g), g.is_balanced());
        }
        assert!(!incidence_identity(
            &Digraph::from_arcs(2, &[(0, 1)]).unwrap()
        ));
    }
}
