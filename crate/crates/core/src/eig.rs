//! Dense eigensolvers for small matrices.
//!
//! * [`sym_eigen`]: cyclic two-sided Jacobi for real symmetric matrices.
//! * [`singular_values`]: one-sided (Hestenes) Jacobi, i.e. Jacobi on `MᵀM`
//!   carried out implicitly on the columns of `M`, which keeps small singular
//!   values accurate to `ε‖M‖` instead of `√ε‖M‖`.
//! * [`normal_spectrum`]: complex spectrum of a real normal matrix from its
//!   commuting symmetric and skew-symmetric parts.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Real, Tolerances};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a symmetric matrix, ascending; `vectors` holds them as columns.
#[derive(Debug, Clone)]
pub struct SymEigen<F> {
    pub values: Vec<F>,
    pub vectors: Matrix<F>,
}

/// Frobenius norm floored at one; the unit all relative tolerances scale by.
pub fn scale_of<F: Real>(m: &Matrix<F>) -> F {
    m.frobenius_norm().max(F::one())
}

fn off_diagonal_norm<F: Real>(a: &Matrix<F>) -> F {
    let n = a.rows();
    let mut s = F::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// `t = tan φ` of the Jacobi rotation annihilating an off-diagonal entry,
/// given `ζ = (a_qq − a_pp) / (2 a_pq)`.
fn rotation_tangent<F: Real>(zeta: F) -> F {
    if zeta.abs() > F::lit(1e100) {
        return F::one() / (F::lit(2.0) * zeta);
    }
    let t = F::one() / (zeta.abs() + (F::one() + zeta * zeta).sqrt());
    if zeta < F::zero() {
        -t
    } else {
        t
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi sweeps.
///
/// Sweeps run until the off-diagonal mass reaches rounding level; the result
/// is rejected if after [`MAX_SWEEPS`] it still exceeds `tol·‖S‖`.
pub fn sym_eigen<F: Real>(s: &Matrix<F>, tol: F) -> Result<SymEigen<F>> {
    if !s.is_square() {
        return Err(Error::Dimension(format!(
            "{}x{} is not square",
            s.rows(),
            s.cols()
        )));
    }
    let n = s.rows();
    let norm = s.frobenius_norm();
    let asym = s.max_abs_diff(&s.transpose());
    if asym > tol * norm.max(F::one()) {
        return Err(Error::NotSymmetric(asym.to_f64().unwrap_or(f64::NAN)));
    }
    let mut a = Matrix::from_fn(n, n, |i, j| (s[(i, j)] + s[(j, i)]) / F::lit(2.0));
    let mut v = Matrix::<F>::identity(n);
    let floor = F::epsilon() * norm;
    let mut converged = false;
    for sweep in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= floor {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == F::zero() {
                    continue;
                }
                let g = F::lit(100.0) * apq.abs();
                let (app, aqq) = (a[(p, p)], a[(q, q)]);
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[(p, q)] = F::zero();
                    a[(q, p)] = F::zero();
                    continue;
                }
                let t = rotation_tangent((aqq - app) / (F::lit(2.0) * apq));
                let c = F::one() / (t * t + F::one()).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                a[(p, q)] = F::zero();
                a[(q, p)] = F::zero();
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > tol * norm {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
    Ok(SymEigen {
        values: order.iter().map(|&i| a[(i, i)]).collect(),
        vectors: Matrix::from_fn(n, n, |r, c| v[(r, order[c])]),
    })
}

/// Singular values, descending: square roots of the eigenvalues of `MᵀM`,
/// computed by one-sided Jacobi rotations of the columns of `M`.
pub fn singular_values<F: Real>(m: &Matrix<F>, tol: F) -> Result<Vec<F>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut u = m.clone();
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (mut alpha, mut beta, mut gamma) = (F::zero(), F::zero(), F::zero());
                for i in 0..rows {
                    let (x, y) = (u[(i, p)], u[(i, q)]);
                    alpha = alpha + x * x;
                    beta = beta + y * y;
                    gamma = gamma + x * y;
                }
                if gamma.abs() <= F::epsilon() * (alpha * beta).sqrt() || gamma == F::zero() {
                    continue;
                }
                rotated = true;
                let t = rotation_tangent((beta - alpha) / (F::lit(2.0) * gamma));
                let c = F::one() / (t * t + F::one()).sqrt();
                let sn = t * c;
                for i in 0..rows {
                    let (x, y) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = c * x - sn * y;
                    u[(i, q)] = sn * x + c * y;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        // Accept a stalled sweep only if the columns are orthogonal to `tol`.
        let gram = &u.transpose() * &u;
        let off = off_diagonal_norm(&gram);
        if off > tol * gram.frobenius_norm() {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
    }
    let mut sv: Vec<F> = (0..cols)
        .map(|j| {
            (0..rows)
                .fold(F::zero(), |acc, i| acc + u[(i, j)] * u[(i, j)])
                .sqrt()
        })
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}

/// One distinct eigenvalue. An entry with `im > 0` stands for the conjugate
/// pair `re ± i·im`, each with the stated multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry<F> {
    pub value: Complex<F>,
    pub multiplicity: usize,
}

impl<F: Real> SpectrumEntry<F> {
    pub fn is_pair(&self) -> bool {
        self.value.im > F::zero()
    }

    /// Number of eigenvalues (with multiplicity) this entry accounts for.
    pub fn count(&self) -> usize {
        if self.is_pair() {
            2 * self.multiplicity
        } else {
            self.multiplicity
        }
    }
}

/// Spectrum of a real normal matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpectrum<F> {
    entries: Vec<SpectrumEntry<F>>,
    residual: F,
    scale: F,
}

impl<F: Real> ComplexSpectrum<F> {
    /// Canonical entries sorted by real then imaginary part.
    pub fn entries(&self) -> &[SpectrumEntry<F>] {
        &self.entries
    }

    /// Largest eigenpair residual `‖L(p+iq) − λ(p+iq)‖` observed.
    pub fn residual(&self) -> F {
        self.residual
    }

    /// Frobenius norm of the source matrix, floored at one.
    pub fn scale(&self) -> F {
        self.scale
    }

    /// Order of the matrix (eigenvalues counted with multiplicity).
    pub fn len(&self) -> usize {
        self.entries.iter().map(SpectrumEntry::count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Every eigenvalue with multiplicity; pairs expand to both conjugates.
    pub fn eigenvalues(&self) -> Vec<Complex<F>> {
        let mut out = Vec::with_capacity(self.len());
        for e in &self.entries {
            for _ in 0..e.multiplicity {
                out.push(e.value);
                if e.is_pair() {
                    out.push(e.value.conj());
                }
            }
        }
        out
    }

    /// Number of eigenvalues within `zero_tol·scale` of the origin.
    pub fn zero_multiplicity(&self, zero_tol: F) -> usize {
        self.eigenvalues()
            .iter()
            .filter(|z| z.norm() <= zero_tol * self.scale)
            .count()
    }

    pub fn sum(&self) -> Complex<F> {
        self.eigenvalues()
            .into_iter()
            .fold(Complex::new(F::zero(), F::zero()), |a, b| a + b)
    }

    pub fn product(&self) -> Complex<F> {
        self.eigenvalues()
            .into_iter()
            .fold(Complex::new(F::one(), F::zero()), |a, b| a * b)
    }

    /// Build from explicit entries (used for spectra known in closed form).
    pub fn from_entries(mut entries: Vec<SpectrumEntry<F>>, scale: F) -> Self {
        for e in &mut entries {
            e.value.im = e.value.im.abs();
        }
        sort_entries(&mut entries);
        ComplexSpectrum {
            entries,
            residual: F::zero(),
            scale,
        }
    }
}

fn sort_entries<F: Real>(entries: &mut [SpectrumEntry<F>]) {
    entries.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .unwrap()
    });
}

/// Group sorted values into runs whose consecutive gaps are at most `width`.
fn chain_clusters<F: Real>(sorted: &[F], width: F) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > width {
            out.push(start..i);
            start = i;
        }
    }
    out
}

fn norm<F: Real>(v: &[F]) -> F {
    v.iter().fold(F::zero(), |a, &x| a + x * x).sqrt()
}

fn dot<F: Real>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |s, (&x, &y)| s + x * y)
}

/// Complex spectrum of a real normal matrix `L`.
///
/// `L = S + K` with `S` symmetric and `K` skew; normality is exactly
/// `SK = KS`, so every eigenspace of `S` is `K`-invariant. Each cluster of
/// `S`-eigenvalues `a` is resolved by the symmetric block `(KV)ᵀ(KV)` whose
/// eigenvalues are `b²`; a two-dimensional `b`-plane spanned by unit `p` and
/// `q = −Kp/b` carries the conjugate pair `a ± ib`.
pub fn normal_spectrum<F: Real>(l: &Matrix<F>, tol: &Tolerances<F>) -> Result<ComplexSpectrum<F>> {
    if !l.is_square() {
        return Err(Error::Dimension(format!(
            "{}x{} is not square",
            l.rows(),
            l.cols()
        )));
    }
    let n = l.rows();
    let scale = scale_of(l);
    let lt = l.transpose();
    let half = F::lit(0.5);
    let s = Matrix::from_fn(n, n, |i, j| (l[(i, j)] + lt[(i, j)]) * half);
    let k = Matrix::from_fn(n, n, |i, j| (l[(i, j)] - lt[(i, j)]) * half);
    let commutator = (&(&s * &k) - &(&k * &s)).frobenius_norm();
    if commutator > tol.tol * scale * scale {
        return Err(Error::NotNormalMatrix(
            commutator.to_f64().unwrap_or(f64::NAN),
        ));
    }

    let sym = sym_eigen(&s, tol.tol)?;
    let width = tol.cluster * scale;
    let mut entries = Vec::new();
    let mut residual = F::zero();

    let pair_residual = |p: &[F], q: &[F], a: F, b: F| {
        let lp = l.mul_vec(p);
        let lq = l.mul_vec(q);
        let re: Vec<F> = (0..n).map(|i| lp[i] - (a * p[i] - b * q[i])).collect();
        let im: Vec<F> = (0..n).map(|i| lq[i] - (a * q[i] + b * p[i])).collect();
        (dot(&re, &re) + dot(&im, &im)).sqrt()
    };

    for range in chain_clusters(&sym.values, width) {
        let m = range.len();
        let a = sym.values[range.clone()].iter().copied().sum::<F>() / F::from_usize(m).unwrap();
        let basis = Matrix::from_fn(n, m, |i, j| sym.vectors[(i, range.start + j)]);
        let kb = &k * &basis;
        let gram = &kb.transpose() * &kb;
        let inner = sym_eigen(&gram, tol.tol)?;
        // |b| for each inner eigenvector, measured linearly as ‖K·u‖.
        let mut rot: Vec<(F, Vec<F>)> = (0..m)
            .map(|j| {
                let w = inner.vectors.column(j);
                let u = basis.mul_vec(&w);
                (norm(&k.mul_vec(&u)), u)
            })
            .collect();
        rot.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let bs: Vec<F> = rot.iter().map(|r| r.0).collect();
        for group in chain_clusters(&bs, width) {
            let size = group.len();
            let b = bs[group.clone()].iter().copied().sum::<F>() / F::from_usize(size).unwrap();
            if b <= tol.zero_snap * scale {
                for (_, u) in &rot[group.clone()] {
                    let zero = vec![F::zero(); n];
                    residual = residual.max(pair_residual(u, &zero, a, F::zero()));
                }
                entries.push(SpectrumEntry {
                    value: Complex::new(a, F::zero()),
                    multiplicity: size,
                });
                continue;
            }
            if size % 2 != 0 {
                return Err(Error::IllConditioned(format!(
                    "odd-dimensional rotation space of size {size} near b = {b}"
                )));
            }
            let mut chosen: Vec<Vec<F>> = Vec::new();
            let mut pairs = 0;
            for (_, u) in &rot[group.clone()] {
                if pairs == size / 2 {
                    break;
                }
                let mut p = u.clone();
                for c in &chosen {
                    let proj = dot(&p, c);
                    for (pi, &ci) in p.iter_mut().zip(c) {
                        *pi = *pi - proj * ci;
                    }
                }
                let pn = norm(&p);
                if pn < half {
                    continue;
                }
                p.iter_mut().for_each(|x| *x = *x / pn);
                let mut q: Vec<F> = k.mul_vec(&p).into_iter().map(|x| -x).collect();
                let bq = norm(&q);
                q.iter_mut().for_each(|x| *x = *x / bq);
                residual = residual.max(pair_residual(&p, &q, a, bq));
                chosen.push(p);
                chosen.push(q);
                pairs += 1;
            }
            if pairs != size / 2 {
                return Err(Error::IllConditioned(format!(
                    "found {pairs} of {} rotation planes near b = {b}",
                    size / 2
                )));
            }
            entries.push(SpectrumEntry {
                value: Complex::new(a, b),
                multiplicity: size / 2,
            });
        }
    }
    if residual > tol.cluster * scale {
        return Err(Error::IllConditioned(format!(
            "eigenpair residual {residual} exceeds the clustering tolerance"
        )));
    }
    sort_entries(&mut entries);
    Ok(ComplexSpectrum {
        entries,
        residual,
        scale,
    })
}

/// Greedy multiset equality of complex values within an absolute tolerance.
pub fn multisets_match<F: Real>(a: &[Complex<F>], b: &[Complex<F>], tol: F) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        let best = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.partial_cmp(&q.1).unwrap());
        match best {
            Some((i, d)) if d <= tol => {
                used[i] = true;
                true
            }
            _ => false,
        }
    })
}

/// Checks that `Lᵀ` has exactly the conjugate spectrum of `L`.
pub fn conjugate_transpose_check<F: Real>(
    l: &Matrix<F>,
    spectrum: &ComplexSpectrum<F>,
    tol: &Tolerances<F>,
) -> Result<bool> {
    let transposed = normal_spectrum(&l.transpose(), tol)?;
    let conj: Vec<Complex<F>> = spectrum.eigenvalues().iter().map(Complex::conj).collect();
    Ok(multisets_match(
        &transposed.eigenvalues(),
        &conj,
        tol.compare * spectrum.scale(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: Vec<Vec<f64>>) -> Matrix<f64> {
        Matrix::from_rows(rows).unwrap()
    }

    fn c3_laplacian() -> Matrix<f64> {
        real(vec![
            vec![1.0, -1.0, 0.0],
            vec![0.0, 1.0, -1.0],
            vec![-1.0, 0.0, 1.0],
        ])
    }

    fn close(a: f64, b: f64, eps: f64) -> bool {
        (a - b).abs() <= eps
    }

    #[test]
    fn jacobi_on_named_matrices() {
        let id = sym_eigen(&Matrix::<f64>::identity(3), 1e-10).unwrap();
        assert!(id.values.iter().all(|&v| close(v, 1.0, 1e-14)));

        let l = c3_laplacian();
        let s = &l + &l.transpose();
        let e = sym_eigen(&s, 1e-10).unwrap();
        for (v, want) in e.values.iter().zip([0.0, 3.0, 3.0]) {
            assert!(close(*v, want, 1e-12), "{:?}", e.values);
        }
        let k3 = real(vec![
            vec![2.0, -1.0, -1.0],
            vec![-1.0, 2.0, -1.0],
            vec![-1.0, -1.0, 2.0],
        ]);
        let e = sym_eigen(&k3, 1e-10).unwrap();
        for (v, want) in e.values.iter().zip([0.0, 3.0, 3.0]) {
            assert!(close(*v, want, 1e-12));
        }
        let vtv = &e.vectors.transpose() * &e.vectors;
        assert!(vtv.max_abs_diff(&Matrix::identity(3)) < 1e-12);
    }

    #[test]
    fn jacobi_rejects_bad_input() {
        assert!(matches!(
            sym_eigen(&real(vec![vec![1.0, 2.0], vec![0.0, 1.0]]), 1e-10),
            Err(Error::NotSymmetric(_))
        ));
        assert!(sym_eigen(&Matrix::<f64>::zeros(2, 3), 1e-10).is_err());
    }

    #[test]
    fn jacobi_in_single_precision() {
        let m = Matrix::<f32>::from_rows(vec![vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let e = sym_eigen(&m, 1e-4).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-5 && (e.values[1] - 3.0).abs() < 1e-5);
    }

    #[test]
    fn triangle_spectrum() {
        let spec = normal_spectrum(&c3_laplacian(), &Tolerances::default()).unwrap();
        assert_eq!(spec.len(), 3);
        let e = spec.entries();
        assert_eq!(e.len(), 2);
        assert!(close(e[0].value.norm(), 0.0, 1e-12));
        assert!(close(e[1].value.re, 1.5, 1e-12));
        assert!(close(e[1].value.im, 3f64.sqrt() / 2.0, 1e-12));
        assert!(e[1].is_pair());
        assert!(spec.residual() < 1e-12);
    }

    #[test]
    fn symmetric_input_has_real_spectrum() {
        let k3 = real(vec![
            vec![2.0, -1.0, -1.0],
            vec![-1.0, 2.0, -1.0],
            vec![-1.0, -1.0, 2.0],
        ]);
        let spec = normal_spectrum(&k3, &Tolerances::default()).unwrap();
        let ev = spec.eigenvalues();
        assert!(ev.iter().all(|z| z.im == 0.0));
        assert_eq!(spec.entries().last().unwrap().multiplicity, 2);
    }

    #[test]
    fn non_normal_input_rejected() {
        let path = real(vec![
            vec![1.0, -1.0, 0.0],
            vec![0.0, 1.0, -1.0],
            vec![0.0, 0.0, 0.0],
        ]);
        assert!(matches!(
            normal_spectrum(&path, &Tolerances::default()),
            Err(Error::NotNormalMatrix(_))
        ));
    }

    #[test]
    fn singular_values_of_named_matrices() {
        let sv = singular_values(&Matrix::<f64>::identity(4), 1e-10).unwrap();
        assert!(sv.iter().all(|&s| close(s, 1.0, 1e-14)));

        let l = c3_laplacian();
        let shifted = &Matrix::identity(3).scale(&-2.0) + &l;
        let sv = singular_values(&shifted, 1e-10).unwrap();
        for (s, want) in sv.iter().zip([2.0, 1.0, 1.0]) {
            assert!(close(*s, want, 1e-12), "{sv:?}");
        }
        let sv = singular_values(&l, 1e-10).unwrap();
        for (s, want) in sv.iter().zip([3f64.sqrt(), 3f64.sqrt(), 0.0]) {
            assert!(close(*s, want, 1e-12), "{sv:?}");
        }
        let rect = real(vec![vec![3.0, 0.0], vec![0.0, 4.0], vec![0.0, 0.0]]);
        assert_eq!(singular_values(&rect, 1e-10).unwrap(), vec![4.0, 3.0]);
    }

    #[test]
    fn transposed_spectrum_is_conjugate() {
        let tol = Tolerances::default();
        let l = c3_laplacian();
        let spec = normal_spectrum(&l, &tol).unwrap();
        assert!(conjugate_transpose_check(&l, &spec, &tol).unwrap());
        // a spectrum that is not conjugate-closed fails the comparison
        let fake = ComplexSpectrum::from_entries(
            vec![
                SpectrumEntry {
                    value: Complex::new(0.0, 0.0),
                    multiplicity: 1,
                },
                SpectrumEntry {
                    value: Complex::new(1.5, 0.0),
                    multiplicity: 2,
                },
            ],
            1.0,
        );
        assert!(!conjugate_transpose_check(&l, &fake, &tol).unwrap());
    }

    #[test]
    fn multiset_matching() {
        let a = [Complex::new(1.0, 1.0), Complex::new(1.0, -1.0)];
        let b = [Complex::new(1.0, -1.0), Complex::new(1.0, 1.0 + 1e-12)];
        assert!(multisets_match(&a, &b, 1e-9));
        assert!(!multisets_match(&a, &b[..1], 1e-9));
        assert!(!multisets_match(&a, &[a[0], a[0]], 1e-9));
    }
}
