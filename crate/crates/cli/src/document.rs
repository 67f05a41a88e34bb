//! JSON documents emitted by `normlap analyze`.
//!
//! Field names are part of the output contract. Complex numbers are written
//! as `{"re": .., "im": ..}`. Floats use serde_json's shortest round-trip
//! representation, so a document read back compares equal.

use normlap::census::ClassFlags;
use normlap::oracle::{self, MAX_SCAN};
use normlap::spectral::{self, Branch, MuChoice, Verdict};
use normlap::{Digraph, Error, Separation, Spectrum, Tolerances};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const TOOL: &str = "normlap";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSettings {
    pub tol: f64,
    pub cluster: f64,
    pub zero_snap: f64,
    pub compare: f64,
    /// Absolute slack on the right-hand side when deciding the verdict.
    pub bound_slack: f64,
}

impl ToleranceSettings {
    pub fn new(t: &Tolerances<f64>) -> Self {
        ToleranceSettings {
            tol: t.tol,
            cluster: t.cluster,
            zero_snap: t.zero_snap,
            compare: t.compare,
            bound_slack: oracle::BOUND_SLACK,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub vertices: usize,
    pub arcs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureFlags {
    /// In-degree equals out-degree at every vertex.
    pub balanced: bool,
    /// Balanced and weakly connected.
    pub eulerian: bool,
    pub connected: bool,
    pub strongly_connected: bool,
    pub undirected: bool,
    pub regular: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalityFlags {
    pub laplacian: bool,
    pub adjacency: bool,
    /// The common-neighbour criterion for a normal Laplacian.
    pub combinatorial: bool,
    pub criterion_agrees: bool,
}

/// One distinct eigenvalue; conjugates are listed separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenvalueEntry {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MuKind {
    Unused,
    Zero,
    Eigenvalue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionDoc {
    pub theta: ComplexValue,
    pub nu: ComplexValue,
    pub mu_kind: MuKind,
    /// Present when `mu_kind` is `eigenvalue`.
    pub mu: Option<ComplexValue>,
    pub alpha: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationDoc {
    pub y: Vec<usize>,
    pub z: Vec<usize>,
}

impl From<&Separation> for SeparationDoc {
    fn from(s: &Separation) -> Self {
        SeparationDoc {
            y: s.y.iter().collect(),
            z: s.z.iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteForce {
    /// Largest `yz / ((n−y)(n−z))` over all separations; 0 if there are none.
    pub lhs: f64,
    pub witness: Option<SeparationDoc>,
    pub separations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisDocument {
    pub tool: String,
    pub version: String,
    pub tolerances: ToleranceSettings,
    pub input: InputDigest,
    pub structure: StructureFlags,
    pub normality: NormalityFlags,
    /// Null when the Laplacian is not normal.
    pub spectrum: Option<Vec<EigenvalueEntry>>,
    pub selection: Option<SelectionDoc>,
    pub rhs: Option<f64>,
    /// Present only with `--brute-force` on an applicable input.
    pub brute_force: Option<BruteForce>,
    pub verdict: Option<Verdict>,
    /// Why the bound does not apply.
    pub reason: Option<String>,
}

impl AnalysisDocument {
    pub fn is_applicable(&self) -> bool {
        self.reason.is_none()
    }
}

/// Entries in solver order; the eigenvalue within `compare·scale` of the
/// origin is reported as exactly zero.
fn spectrum_entries(s: &Spectrum, tol: &Tolerances<f64>) -> Vec<EigenvalueEntry> {
    let zero = tol.compare * s.scale();
    let mut out = Vec::new();
    for e in s.entries() {
        let value = if e.value.norm() <= zero {
            Complex64::new(0.0, 0.0)
        } else {
            e.value
        };
        out.push(EigenvalueEntry {
            re: value.re,
            im: value.im,
            multiplicity: e.multiplicity,
        });
        if e.is_pair() {
            out.push(EigenvalueEntry {
                re: e.value.re,
                im: -e.value.im,
                multiplicity: e.multiplicity,
            });
        }
    }
    out
}

fn selection_doc(s: &normlap::Selection) -> SelectionDoc {
    let (mu_kind, mu) = match s.mu {
        MuChoice::Unused => (MuKind::Unused, None),
        MuChoice::Zero => (MuKind::Zero, None),
        MuChoice::Eigenvalue(z) => (MuKind::Eigenvalue, Some(z.into())),
    };
    SelectionDoc {
        theta: s.theta.into(),
        nu: s.nu.into(),
        mu_kind,
        mu,
        alpha: s.alpha,
        branch: s.branch,
    }
}

/// Analyse `g`. Numerical failures are errors; inputs outside the bound's
/// hypotheses produce a document with a `reason`.
pub fn analyze(
    g: &Digraph,
    tol: &Tolerances<f64>,
    brute_force: bool,
) -> normlap::Result<AnalysisDocument> {
    let flags = ClassFlags::of(g);
    let mut doc = AnalysisDocument {
        tool: TOOL.into(),
        version: VERSION.into(),
        tolerances: ToleranceSettings::new(tol),
        input: InputDigest {
            vertices: g.n(),
            arcs: g.arc_count(),
        },
        structure: StructureFlags {
            balanced: flags.balanced,
            eulerian: g.is_eulerian(),
            connected: flags.weakly_connected,
            strongly_connected: g.is_strongly_connected(),
            undirected: flags.undirected,
            regular: flags.regular,
        },
        normality: NormalityFlags {
            laplacian: flags.normal_laplacian,
            adjacency: flags.normal_adjacency,
            combinatorial: flags.combinatorial_normal,
            criterion_agrees: flags.combinatorial_normal == flags.normal_laplacian,
        },
        spectrum: None,
        selection: None,
        rhs: None,
        brute_force: None,
        verdict: None,
        reason: None,
    };
    let spectrum = match spectral::laplacian_spectrum::<f64>(g, tol) {
        Ok(s) => s,
        Err(Error::NotApplicable(why)) => {
            doc.reason = Some(why.to_string());
            return Ok(doc);
        }
        Err(e) => return Err(e),
    };
    doc.spectrum = Some(spectrum_entries(&spectrum, tol));
    let mut report = match spectral::separation_bound::<f64>(g, tol) {
        Ok(r) => r,
        Err(Error::NotApplicable(why)) => {
            doc.reason = Some(why.to_string());
            return Ok(doc);
        }
        Err(e) => return Err(e),
    };
    doc.selection = Some(selection_doc(&report.selection));
    doc.rhs = Some(report.rhs);
    if brute_force {
        if g.n() > MAX_SCAN {
            return Err(Error::TooLarge {
                n: g.n(),
                max: MAX_SCAN,
            });
        }
        let scan = oracle::max_separation_lhs(g)?;
        report.attach_lhs(
            scan.best_lhs_real(),
            scan.witness.clone(),
            oracle::BOUND_SLACK,
        );
        doc.brute_force = Some(BruteForce {
            lhs: report.lhs_max.unwrap_or(0.0),
            witness: scan.witness.as_ref().map(SeparationDoc::from),
            separations: scan.count,
        });
        doc.verdict = report.verdict;
    }
    Ok(doc)
}

fn fmt_complex(z: &ComplexValue) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im > 0.0 {
        format!("{} + {}i", z.re, z.im)
    } else {
        format!("{} - {}i", z.re, -z.im)
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Plain-text rendering for `--text`.
pub fn render_text(doc: &AnalysisDocument) -> String {
    let mut out = String::new();
    let s = &doc.structure;
    let nf = &doc.normality;
    out.push_str(&format!("{} {}\n", doc.tool, doc.version));
    out.push_str(&format!(
        "vertices {}  arcs {}\n",
        doc.input.vertices, doc.input.arcs
    ));
    out.push_str(&format!(
        "balanced {}  eulerian {}  connected {}  strongly connected {}  undirected {}  regular {}\n",
        yes(s.balanced),
        yes(s.eulerian),
        yes(s.connected),
        yes(s.strongly_connected),
        yes(s.undirected),
        yes(s.regular)
    ));
    out.push_str(&format!(
        "normal: laplacian {}  adjacency {}  combinatorial {}{}\n",
        yes(nf.laplacian),
        yes(nf.adjacency),
        yes(nf.combinatorial),
        if nf.criterion_agrees {
            ""
        } else {
            "  (criteria disagree)"
        }
    ));
    if let Some(spectrum) = &doc.spectrum {
        out.push_str("spectrum:\n");
        for e in spectrum {
            let z = ComplexValue { re: e.re, im: e.im };
            out.push_str(&format!("  {} (x{})\n", fmt_complex(&z), e.multiplicity));
        }
    }
    if let Some(sel) = &doc.selection {
        out.push_str(&format!("theta {}\n", fmt_complex(&sel.theta)));
        out.push_str(&format!("nu {}\n", fmt_complex(&sel.nu)));
        match (&sel.mu_kind, &sel.mu) {
            (MuKind::Eigenvalue, Some(mu)) => out.push_str(&format!("mu {}\n", fmt_complex(mu))),
            (MuKind::Zero, _) => out.push_str("mu 0\n"),
            _ => {}
        }
        let branch = match sel.branch {
            Branch::UniformRealPart => "uniform-real-part",
            Branch::General => "general",
        };
        out.push_str(&format!("alpha {} ({branch})\n", sel.alpha));
    }
    if let Some(rhs) = doc.rhs {
        out.push_str(&format!("rhs {rhs}\n"));
    }
    if let Some(bf) = &doc.brute_force {
        out.push_str(&format!(
            "lhs {} over {} separations",
            bf.lhs, bf.separations
        ));
        if let Some(w) = &bf.witness {
            out.push_str(&format!(" (Y = {:?}, Z = {:?})", w.y, w.z));
        }
        out.push('\n');
    }
    if let Some(v) = doc.verdict {
        out.push_str(match v {
            Verdict::Holds => "verdict holds\n",
            Verdict::Violated => "verdict VIOLATED\n",
        });
    }
    if let Some(reason) = &doc.reason {
        out.push_str(&format!("not applicable: {reason}\n"));
    }
    out
}
