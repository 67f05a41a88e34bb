//! The separation bound for digraphs with normal Laplacian.
//!
//! For a connected digraph on `n` vertices with normal `L` and a separation
//! `(Z, Y)`,
//!
//! ```text
//! |Y||Z| / ((n−|Y|)(n−|Z|)) ≤ |α + θ|² / α²
//! ```
//!
//! where, with `f(λ) = |λ|² / (2 Re λ)` and
//! `g(λ) = Re λ · (f(θ) − f(λ)) / (Re θ − Re λ)`:
//!
//! * `θ` maximizes and `ν` minimizes `f` over the nonzero eigenvalues;
//! * `α = −f(θ) − f(ν)` when every other nonzero eigenvalue has real part at
//!   least `Re θ`, and `α = −f(θ) − g(μ)` otherwise, `μ` minimizing `g` over
//!   eigenvalues with `g(μ) ≥ 0` (and `g(μ) := 0` when none exists).
//!
//! With this `α`, `|α|` and `|α + θ|` are the two largest singular values of
//! `αI + L`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, Separation};
use crate::eig::{self, ComplexSpectrum};
use crate::error::{Error, NotApplicable, Result};
use crate::exact;
use crate::matrix::Matrix;
use crate::scalar::{Real, Tolerances};

/// `f(λ) = |λ|² / (2 Re λ)`, defined for `Re λ > 0`.
pub fn f_value<F: Real>(lambda: Complex<F>) -> Result<F> {
    if lambda.re <= F::zero() {
        return Err(Error::Domain(format!("f needs Re(λ) > 0, got {lambda}")));
    }
    Ok(lambda.norm_sqr() / (F::lit(2.0) * lambda.re))
}

/// `g(λ) = Re λ (f(θ) − f(λ)) / (Re θ − Re λ)`, defined for `Re λ ≠ Re θ`.
pub fn g_value<F: Real>(lambda: Complex<F>, theta: Complex<F>) -> Result<F> {
    let denom = theta.re - lambda.re;
    if denom == F::zero() {
        return Err(Error::Domain(format!(
            "g is undefined when Re(λ) = Re(θ) = {}",
            theta.re
        )));
    }
    Ok(lambda.re * (f_value(theta)? - f_value(lambda)?) / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// Every nonzero eigenvalue other than `θ` has `Re λ ≥ Re θ`.
    UniformRealPart,
    General,
}

/// The eigenvalue `μ` used by the general branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum MuChoice<F> {
    /// The uniform branch does not use `μ`.
    Unused,
    /// No eigenvalue qualified; `μ = 0` and `g(μ) = 0`.
    Zero,
    Eigenvalue(Complex<F>),
}

/// Choice of `θ`, `ν`, `μ` and `α`. Eigenvalues are reported by their
/// representative with nonnegative imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaSelection<F> {
    pub theta: Complex<F>,
    pub nu: Complex<F>,
    pub mu: MuChoice<F>,
    pub alpha: F,
    pub branch: Branch,
}

impl<F: Real> AlphaSelection<F> {
    /// `|α + θ|² / α²`
    pub fn rhs(&self) -> F {
        (self.theta + self.alpha).norm_sqr() / (self.alpha * self.alpha)
    }
}

fn nonzero_eigenvalues<F: Real>(
    spectrum: &ComplexSpectrum<F>,
    tol: &Tolerances<F>,
) -> Vec<Complex<F>> {
    let zero = tol.compare * spectrum.scale();
    spectrum
        .entries()
        .iter()
        .map(|e| e.value)
        .filter(|z| z.norm() > zero)
        .collect()
}

/// Select `θ`, `ν`, `μ` and `α` from a Laplacian spectrum.
///
/// Among several maximizers of `f`, `θ` is the one with the smallest real
/// part, which keeps `|α + θ|` the second largest singular value.
pub fn select_alpha<F: Real>(
    spectrum: &ComplexSpectrum<F>,
    tol: &Tolerances<F>,
) -> Result<AlphaSelection<F>> {
    let eps = tol.compare * spectrum.scale();
    let nonzero = nonzero_eigenvalues(spectrum, tol);
    if nonzero.is_empty() {
        return Err(Error::NotApplicable(NotApplicable::NoNonzeroEigenvalue));
    }
    let scored = nonzero
        .iter()
        .map(|&z| Ok((z, f_value(z)?)))
        .collect::<Result<Vec<_>>>()?;
    let f_max = scored.iter().map(|s| s.1).fold(F::neg_infinity(), F::max);
    let (theta, f_theta) = scored
        .iter()
        .filter(|s| s.1 >= f_max - eps)
        .min_by(|a, b| a.0.re.partial_cmp(&b.0.re).unwrap())
        .copied()
        .unwrap();
    let (nu, f_nu) = scored
        .iter()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .copied()
        .unwrap();

    let below: Vec<Complex<F>> = nonzero
        .iter()
        .copied()
        .filter(|z| z.re < theta.re - eps)
        .collect();
    if below.is_empty() {
        return Ok(AlphaSelection {
            theta,
            nu,
            mu: MuChoice::Unused,
            alpha: -f_theta - f_nu,
            branch: Branch::UniformRealPart,
        });
    }
    let mut best: Option<(Complex<F>, F)> = None;
    for z in below {
        let g = g_value(z, theta)?;
        if g < -eps {
            continue;
        }
        let g = g.max(F::zero());
        if best.is_none_or(|b| g < b.1) {
            best = Some((z, g));
        }
    }
    let (mu, g_mu) = match best {
        Some((z, g)) => (MuChoice::Eigenvalue(z), g),
        None => (MuChoice::Zero, F::zero()),
    };
    Ok(AlphaSelection {
        theta,
        nu,
        mu,
        alpha: -f_theta - g_mu,
        branch: Branch::General,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport<F> {
    pub n: usize,
    pub selection: AlphaSelection<F>,
    /// `|α + θ|² / α²`
    pub rhs: F,
    /// Largest left-hand side over all separations, when an oracle ran.
    pub lhs_max: Option<F>,
    pub witness: Option<Separation>,
    pub spectrum: ComplexSpectrum<F>,
    pub verdict: Option<Verdict>,
}

impl<F: Real> BoundReport<F> {
    /// Record a brute-force left-hand side and decide the verdict with an
    /// absolute slack of `slack` on the right-hand side.
    pub fn attach_lhs(&mut self, lhs: F, witness: Option<Separation>, slack: F) {
        self.lhs_max = Some(lhs);
        self.witness = witness;
        self.verdict = Some(if lhs <= self.rhs + slack {
            Verdict::Holds
        } else {
            Verdict::Violated
        });
    }
}

/// Laplacian as a floating-point matrix.
pub fn real_laplacian<F: Real>(g: &Digraph) -> Matrix<F> {
    exact::laplacian(g).map(|x| F::from_i64(i64::try_from(x).expect("small entries")).unwrap())
}

/// Spectrum of `L(g)` after an exact normality check.
pub fn laplacian_spectrum<F: Real>(g: &Digraph, tol: &Tolerances<F>) -> Result<ComplexSpectrum<F>> {
    if !exact::is_normal_laplacian(g) {
        return Err(Error::NotApplicable(NotApplicable::NotNormal {
            balanced: g.is_balanced(),
        }));
    }
    eig::normal_spectrum(&real_laplacian(g), tol)
}

/// Right-hand side of the separation bound for `g`.
pub fn separation_bound<F: Real>(g: &Digraph, tol: &Tolerances<F>) -> Result<BoundReport<F>> {
    let spectrum = laplacian_spectrum(g, tol)?;
    if !g.is_weakly_connected() {
        return Err(Error::NotApplicable(NotApplicable::Disconnected));
    }
    let selection = select_alpha(&spectrum, tol)?;
    Ok(BoundReport {
        n: g.n(),
        rhs: selection.rhs(),
        selection,
        lhs_max: None,
        witness: None,
        spectrum,
        verdict: None,
    })
}

/// `α = −(σ₂ + σₙ)/2` for the real Laplacian spectrum of a connected graph.
pub fn haemers_alpha<F: Real>(spectrum: &ComplexSpectrum<F>, tol: &Tolerances<F>) -> Result<F> {
    let scale = spectrum.scale();
    let values = spectrum.eigenvalues();
    if let Some(z) = values.iter().find(|z| z.im.abs() > tol.zero_snap * scale) {
        return Err(Error::Domain(format!(
            "complex eigenvalue {z} in a graph spectrum"
        )));
    }
    let mut re: Vec<F> = values.iter().map(|z| z.re).collect();
    re.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let zeros = re.iter().filter(|x| x.abs() <= tol.compare * scale).count();
    if zeros != 1 || re.len() < 2 {
        return Err(Error::Domain(format!(
            "expected a simple zero eigenvalue, found multiplicity {zeros}"
        )));
    }
    Ok(-(re[1] + re[re.len() - 1]) / F::lit(2.0))
}

/// `α = −(|θ|² + |ν|²)/n` for a regular tournament, with `θ`, `ν` the
/// nonzero eigenvalues of largest and smallest modulus.
pub fn tournament_alpha<F: Real>(
    spectrum: &ComplexSpectrum<F>,
    n: usize,
    tol: &Tolerances<F>,
) -> Result<F> {
    let nf = F::from_usize(n).unwrap();
    let half = nf / F::lit(2.0);
    let nonzero = nonzero_eigenvalues(spectrum, tol);
    if nonzero.is_empty() {
        return Err(Error::NotApplicable(NotApplicable::NoNonzeroEigenvalue));
    }
    if let Some(z) = nonzero
        .iter()
        .find(|z| (z.re - half).abs() > tol.compare * spectrum.scale())
    {
        return Err(Error::Domain(format!(
            "eigenvalue {z} does not have real part n/2 = {half}"
        )));
    }
    let moduli = nonzero.iter().map(|z| z.norm_sqr());
    let max = moduli.clone().fold(F::neg_infinity(), F::max);
    let min = moduli.fold(F::infinity(), F::min);
    Ok(-(max + min) / nf)
}

/// Structural facts about a normal Laplacian spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics<F> {
    pub components: usize,
    pub zero_multiplicity: usize,
    /// Smallest real part over the nonzero eigenvalues.
    pub min_nonzero_re: Option<F>,
    /// Smallest modulus over the nonzero eigenvalues.
    pub min_nonzero_modulus: Option<F>,
    /// `Lᵀ` has the conjugate spectrum.
    pub conjugate_transpose: bool,
}

pub fn laplace_diagnostics<F: Real>(g: &Digraph, tol: &Tolerances<F>) -> Result<Diagnostics<F>> {
    let spectrum = laplacian_spectrum(g, tol)?;
    let l = real_laplacian::<F>(g);
    let nonzero = nonzero_eigenvalues(&spectrum, tol);
    Ok(Diagnostics {
        components: g.weak_components().len(),
        zero_multiplicity: spectrum.zero_multiplicity(tol.compare),
        min_nonzero_re: nonzero.iter().map(|z| z.re).reduce(F::min),
        min_nonzero_modulus: nonzero.iter().map(|z| z.norm()).reduce(F::min),
        conjugate_transpose: eig::conjugate_transpose_check(&l, &spectrum, tol)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::SpectrumEntry;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn spectrum(values: &[(f64, f64, usize)]) -> ComplexSpectrum<f64> {
        ComplexSpectrum::from_entries(
            values
                .iter()
                .map(|&(re, im, m)| SpectrumEntry {
                    value: c(re, im),
                    multiplicity: m,
                })
                .collect(),
            1.0,
        )
    }

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn c3() -> Digraph {
        Digraph::from_arcs(3, &[(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn f_examples() {
        assert!((f_value(c(1.5, -0.75f64.sqrt())).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(f_value(c(3.0, 0.0)).unwrap(), 1.5);
        let t5 = c(2.5, 1.538841768587627);
        assert!((f_value(t5).unwrap() - 1.723_606_797_749_979).abs() < 1e-12);
        assert!(f_value(c(0.0, 1.0)).is_err());
        assert!(f_value(c(-1.0, 0.0)).is_err());
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_value(c(1.0, 0.0), c(3.0, 0.0)).unwrap(), 0.5);
        assert_eq!(g_value(c(2.0, 0.0), c(3.0, 0.0)).unwrap(), 1.0);
        assert!(g_value(c(3.0, 1.0), c(3.0, 0.0)).is_err());
        // Re λ > Re θ with f(λ) ≤ f(θ) gives a nonpositive value
        let theta = c(1.0, 2.0);
        assert!(g_value(c(2.0, 0.5), theta).unwrap() <= 0.0);
    }

    #[test]
    fn triangle_selection() {
        let sel = select_alpha(
            &spectrum(&[(0.0, 0.0, 1), (1.5, 0.75f64.sqrt(), 1)]),
            &tol(),
        )
        .unwrap();
        assert_eq!(sel.branch, Branch::UniformRealPart);
        assert!((sel.alpha + 2.0).abs() < 1e-12);
        assert!((sel.rhs() - 0.25).abs() < 1e-12);
        assert_eq!(sel.mu, MuChoice::Unused);
    }

    #[test]
    fn complete_graph_selection() {
        let sel = select_alpha(&spectrum(&[(0.0, 0.0, 1), (3.0, 0.0, 2)]), &tol()).unwrap();
        assert_eq!((sel.theta, sel.nu), (c(3.0, 0.0), c(3.0, 0.0)));
        assert_eq!(sel.alpha, -3.0);
        assert_eq!(sel.rhs(), 0.0);
    }

    #[test]
    fn general_branch_on_a_path() {
        // P3 has Laplacian spectrum {0, 1, 3}
        let s = spectrum(&[(0.0, 0.0, 1), (1.0, 0.0, 1), (3.0, 0.0, 1)]);
        let sel = select_alpha(&s, &tol()).unwrap();
        assert_eq!(sel.branch, Branch::General);
        assert_eq!(sel.mu, MuChoice::Eigenvalue(c(1.0, 0.0)));
        assert_eq!(sel.alpha, -2.0);
        assert_eq!(haemers_alpha(&s, &tol()).unwrap(), -2.0);
    }

    #[test]
    fn theta_ties_prefer_small_real_part() {
        // f(1 + i) = 1 and f(2) = 1: both maximize f
        let s = spectrum(&[(0.0, 0.0, 1), (1.0, 1.0, 1), (2.0, 0.0, 1)]);
        let sel = select_alpha(&s, &tol()).unwrap();
        assert_eq!(sel.theta, c(1.0, 1.0));
        assert_eq!(sel.branch, Branch::UniformRealPart);
    }

    #[test]
    fn single_vertex_is_not_applicable() {
        let err = select_alpha(&spectrum(&[(0.0, 0.0, 1)]), &tol()).unwrap_err();
        assert!(matches!(
            err,
            Error::NotApplicable(NotApplicable::NoNonzeroEigenvalue)
        ));
    }

    #[test]
    fn haemers_rejects_complex_spectra() {
        let s = spectrum(&[(0.0, 0.0, 1), (1.5, 0.8, 1)]);
        assert!(haemers_alpha(&s, &tol()).is_err());
        let k3 = spectrum(&[(0.0, 0.0, 1), (3.0, 0.0, 2)]);
        assert_eq!(haemers_alpha(&k3, &tol()).unwrap(), -3.0);
        let disconnected = spectrum(&[(0.0, 0.0, 2), (2.0, 0.0, 1)]);
        assert!(haemers_alpha(&disconnected, &tol()).is_err());
    }

    #[test]
    fn tournament_alpha_on_triangle() {
        let s = spectrum(&[(0.0, 0.0, 1), (1.5, 0.75f64.sqrt(), 1)]);
        assert!((tournament_alpha(&s, 3, &tol()).unwrap() + 2.0).abs() < 1e-12);
        assert!(tournament_alpha(&s, 5, &tol()).is_err());
    }

    #[test]
    fn separation_bound_on_named_digraphs() {
        let r = separation_bound::<f64>(&c3(), &tol()).unwrap();
        assert!((r.rhs - 0.25).abs() < 1e-12);
        let k3 = Digraph::from_fn(3, |_, _| true).unwrap();
        let r = separation_bound::<f64>(&k3, &tol()).unwrap();
        assert!(r.rhs.abs() < 1e-12);
        let path = Digraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        let err = separation_bound::<f64>(&path, &tol()).unwrap_err();
        assert_eq!(
            err.to_string(),
            "not applicable: Laplacian not normal (not eulerian)"
        );
        let two = c3().disjoint_union(&c3());
        assert!(matches!(
            separation_bound::<f64>(&two, &tol()),
            Err(Error::NotApplicable(NotApplicable::Disconnected))
        ));
    }

    #[test]
    fn verdict_from_attached_lhs() {
        let mut r = separation_bound::<f64>(&c3(), &tol()).unwrap();
        r.attach_lhs(0.25, None, 1e-8);
        assert_eq!(r.verdict, Some(Verdict::Holds));
        r.attach_lhs(0.3, None, 1e-8);
        assert_eq!(r.verdict, Some(Verdict::Violated));
    }

    #[test]
    fn diagnostics() {
        let d = laplace_diagnostics::<f64>(&c3(), &tol()).unwrap();
        assert_eq!(d.zero_multiplicity, 1);
        assert!((d.min_nonzero_re.unwrap() - 1.5).abs() < 1e-12);
        assert!(d.conjugate_transpose);
        let d = laplace_diagnostics::<f64>(&c3().disjoint_union(&c3()), &tol()).unwrap();
        assert_eq!((d.components, d.zero_multiplicity), (2, 2));
    }
}
