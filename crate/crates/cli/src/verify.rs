//! Invariant sweeps behind `normlap verify`.

use normlap::census::{self, Shard};
use normlap::eig::ComplexSpectrum;
use normlap::generators::{self, AbelianGroupSpec};
use normlap::oracle::{self, CHECK_TOL};
use normlap::spectral::{self, Verdict};
use normlap::{exact, Digraph, Tolerances};
use serde::{Deserialize, Serialize};

use crate::document::SeparationDoc;

/// Largest order for the exhaustive sweep.
pub const MAX_ORDER: usize = 5;
/// Largest order for the Cayley family (every connection set is visited).
pub const MAX_CAYLEY: usize = 10;
/// Largest order for the tournament family.
pub const MAX_TOURNAMENT: usize = 13;
/// Smallest real part accepted for a nonzero eigenvalue.
pub const MIN_POSITIVE_RE: f64 = 1e-9;
/// Quotient checks visit every separation, so they stop at this order.
pub const MAX_QUOTIENT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphDoc {
    pub n: usize,
    pub arcs: Vec<[usize; 2]>,
}

impl From<&Digraph> for DigraphDoc {
    fn from(g: &Digraph) -> Self {
        DigraphDoc {
            n: g.n(),
            arcs: g.arcs().map(|(u, v)| [u, v]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub label: String,
    pub digraph: DigraphDoc,
    pub detail: String,
    pub witness: Option<SeparationDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub universe: String,
    pub digraphs: u64,
    pub checks: u64,
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub tol: Tolerances<f64>,
    /// Test hook: negate the bound inequality so every case reports a
    /// violation.
    pub inject_fault: bool,
}

struct Sweep {
    opts: VerifyOptions,
    report: VerifyReport,
}

impl Sweep {
    fn new(universe: String, opts: VerifyOptions) -> Self {
        Sweep {
            opts,
            report: VerifyReport {
                universe,
                digraphs: 0,
                checks: 0,
                failures: Vec::new(),
            },
        }
    }

    fn check(
        &mut self,
        ok: bool,
        check: &str,
        label: &str,
        g: &Digraph,
        detail: impl FnOnce() -> String,
    ) {
        self.check_with(ok, check, label, g, None, detail)
    }

    fn check_with(
        &mut self,
        ok: bool,
        check: &str,
        label: &str,
        g: &Digraph,
        witness: Option<SeparationDoc>,
        detail: impl FnOnce() -> String,
    ) {
        self.report.checks += 1;
        if !ok {
            self.report.failures.push(Failure {
                check: check.into(),
                label: label.into(),
                digraph: g.into(),
                detail: detail(),
                witness,
            });
        }
    }

    fn error(&mut self, check: &str, label: &str, g: &Digraph, e: normlap::Error) {
        self.check(false, check, label, g, || e.to_string());
    }

    /// Every invariant that applies to `g`.
    fn digraph(&mut self, label: &str, g: &Digraph) {
        self.report.digraphs += 1;
        let tol = self.opts.tol;
        let normal = exact::is_normal_laplacian(g);
        let combinatorial = exact::normality_combinatorial(g);
        self.check(
            normal == combinatorial,
            "normality-criterion",
            label,
            g,
            || format!("exact test {normal}, combinatorial criterion {combinatorial}"),
        );
        let balanced = g.is_balanced();
        if balanced {
            self.check(
                oracle::incidence_identity(g),
                "incidence-identity",
                label,
                g,
                || "N·Nᵀ differs from L + Lᵀ".into(),
            );
        }
        if !normal {
            return;
        }
        let connected = g.is_weakly_connected();
        if connected {
            self.check(balanced, "normal-connected-balanced", label, g, || {
                "connected with normal Laplacian but not balanced".into()
            });
        }
        let spectrum = match spectral::laplacian_spectrum::<f64>(g, &tol) {
            Ok(s) => s,
            Err(e) => return self.error("spectrum", label, g, e),
        };
        let zeros = spectrum.zero_multiplicity(tol.compare);
        let components = g.weak_components().len();
        self.check(zeros == components, "zero-multiplicity", label, g, || {
            format!("0 has multiplicity {zeros} but there are {components} components")
        });
        let min_re = spectrum
            .eigenvalues()
            .iter()
            .filter(|z| z.norm() > tol.compare * spectrum.scale())
            .map(|z| z.re)
            .fold(f64::INFINITY, f64::min);
        self.check(
            min_re > MIN_POSITIVE_RE,
            "positive-real-part",
            label,
            g,
            || format!("nonzero eigenvalue with real part {min_re}"),
        );
        if connected && g.n() > 1 {
            self.bound(label, g, &spectrum);
        }
    }

    fn bound(&mut self, label: &str, g: &Digraph, spectrum: &ComplexSpectrum<f64>) {
        let tol = self.opts.tol;
        let (report, scan) = match oracle::verify_bound::<f64>(g, &tol) {
            Ok(r) => r,
            Err(e) => return self.error("bound", label, g, e),
        };
        let holds = (report.verdict == Some(Verdict::Holds)) != self.opts.inject_fault;
        let lhs = report.lhs_max.unwrap_or(0.0);
        self.check_with(
            holds,
            "bound",
            label,
            g,
            scan.witness.as_ref().map(SeparationDoc::from),
            || format!("lhs {lhs} against rhs {}", report.rhs),
        );
        let alpha = report.selection.alpha;
        let theta = report.selection.theta;

        let mut moduli: Vec<f64> = spectrum
            .eigenvalues()
            .iter()
            .map(|z| (z + alpha).norm())
            .collect();
        moduli.sort_by(|a, b| b.total_cmp(a));
        let top = (moduli[0] - alpha.abs()).abs() <= CHECK_TOL;
        let second = moduli.len() < 2 || (moduli[1] - (theta + alpha).norm()).abs() <= CHECK_TOL;
        self.check(top && second, "shifted-moduli-order", label, g, || {
            format!(
                "moduli {moduli:?} with |α| = {} and |α+θ| = {}",
                alpha.abs(),
                (theta + alpha).norm()
            )
        });

        let l = spectral::real_laplacian::<f64>(g);
        match oracle::singular_perturbation_check(&l, spectrum, alpha, &tol) {
            Ok(c) => self.check(c.holds, "singular-values", label, g, || {
                format!("max error {} at α = {alpha}", c.max_error)
            }),
            Err(e) => self.error("singular-values", label, g, e),
        }
        match oracle::verify_block_symmetrization(&l, alpha, &tol) {
            Ok(c) => self.check(c.holds, "block-symmetrization", label, g, || {
                format!("max error {} at α = {alpha}", c.max_error)
            }),
            Err(e) => self.error("block-symmetrization", label, g, e),
        }
        if g.n() > MAX_QUOTIENT {
            return;
        }
        let separations = match oracle::all_separations(g) {
            Ok(it) => it.collect::<Vec<_>>(),
            Err(e) => return self.error("quotient", label, g, e),
        };
        for sep in &separations {
            match oracle::verify_quotient::<f64>(g, sep, alpha, &tol) {
                Ok(c) => self.check_with(c.holds(), "quotient", label, g, Some(sep.into()), || {
                    format!(
                        "exact {} numeric error {} det {} expected {}",
                        c.exact_match, c.numeric_error, c.det, c.det_expected
                    )
                }),
                Err(e) => self.error("quotient", label, g, e),
            }
        }
    }

    fn tournament(&mut self, label: &str, g: &Digraph) {
        self.digraph(label, g);
        let tol = self.opts.tol;
        let result = spectral::separation_bound::<f64>(g, &tol).and_then(|r| {
            let t = spectral::tournament_alpha(&r.spectrum, g.n(), &tol)?;
            Ok((r.selection.alpha, t))
        });
        match result {
            Ok((a, t)) => self.check(
                (a - t).abs() <= CHECK_TOL,
                "tournament-alpha",
                label,
                g,
                || format!("selected α = {a}, closed form {t}"),
            ),
            Err(e) => self.error("tournament-alpha", label, g, e),
        }
    }

    fn cayley(&mut self, label: &str, g: &Digraph) {
        let both = exact::is_normal_laplacian(g) && exact::normality_combinatorial(g);
        self.check(both, "cayley-normal", label, g, || {
            "abelian Cayley digraph with non-normal Laplacian".into()
        });
        self.digraph(label, g);
    }
}

/// Every isomorphism class on `n` vertices.
pub fn verify_order(n: usize, opts: VerifyOptions) -> normlap::Result<VerifyReport> {
    if n > MAX_ORDER {
        return Err(normlap::Error::TooLarge { n, max: MAX_ORDER });
    }
    let mut sweep = Sweep::new(
        format!("all digraphs on {n} vertices up to isomorphism"),
        opts,
    );
    for g in census::enumerate_digraphs(n, Shard::ALL)? {
        let label = census::canonical_code(&g)?;
        sweep.digraph(&format!("class {:#x}", label.bits), &g);
    }
    Ok(sweep.report)
}

/// Every valid connection set of a rotational tournament of order `n`.
pub fn tournament_sets(n: usize) -> Vec<Vec<i64>> {
    let half = (n - 1) / 2;
    (0..1u32 << half)
        .map(|mask| {
            (1..=half)
                .map(|s| {
                    if mask >> (s - 1) & 1 == 1 {
                        (n - s) as i64
                    } else {
                        s as i64
                    }
                })
                .collect()
        })
        .collect()
}

/// Rotational tournaments of odd order `3..=max_n`.
pub fn verify_tournaments(max_n: usize, opts: VerifyOptions) -> normlap::Result<VerifyReport> {
    if max_n > MAX_TOURNAMENT {
        return Err(normlap::Error::TooLarge {
            n: max_n,
            max: MAX_TOURNAMENT,
        });
    }
    let mut sweep = Sweep::new(
        format!("rotational tournaments of odd order 3..={max_n}"),
        opts,
    );
    for n in (3..=max_n).step_by(2) {
        for s in tournament_sets(n) {
            let g = generators::rotational_tournament(n, &s)?;
            sweep.tournament(&format!("tournament n={n} S={s:?}"), &g);
        }
    }
    Ok(sweep.report)
}

/// Cayley digraphs of every abelian group of order `2..=max_n` with every
/// nonempty connection set.
pub fn verify_cayley(max_n: usize, opts: VerifyOptions) -> normlap::Result<VerifyReport> {
    if max_n > MAX_CAYLEY {
        return Err(normlap::Error::TooLarge {
            n: max_n,
            max: MAX_CAYLEY,
        });
    }
    let mut sweep = Sweep::new(
        format!("abelian Cayley digraphs of order 2..={max_n}"),
        opts,
    );
    for order in 2..=max_n {
        for orders in generators::abelian_groups(order) {
            let probe = AbelianGroupSpec::new(orders.clone(), &[])?;
            let elements: Vec<Vec<i64>> = (1..order)
                .map(|i| probe.element(i).iter().map(|&x| x as i64).collect())
                .collect();
            for mask in 1u32..1 << (order - 1) {
                let conn: Vec<Vec<i64>> = elements
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, e)| e.clone())
                    .collect();
                let spec = AbelianGroupSpec::new(orders.clone(), &conn)?;
                let g = generators::cayley_abelian(&spec)?;
                sweep.cayley(&format!("cayley {orders:?} C={conn:?}"), &g);
            }
        }
    }
    Ok(sweep.report)
}
