//! Runs every check on one presentation as a dependency graph of stages and
//! collects the verdicts into a versioned report.
//!
//! A stage runs only when all of its dependencies passed. A dependency that
//! failed or was itself blocked marks the stage `blocked`; a dependency that
//! does not apply (no duality, say) makes the stage `n/a`.

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::Value;

use crate::algebra::{validate_duality, GradedAlgebra};
use crate::delta::{
    check_condition_h, check_delta_self_orthogonality, delta_regrade, delta_resolutions,
    find_height_function, height_uniqueness, verify_degree_zero_isomorphism, verify_prop_kazh,
    DeltaGrading, DeltaResolutions, HeightFunction, HeightOutcome,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gamma::{
    build_gamma, check_directed, check_gamma_classical_koszul, costandard_to_simple_check,
    double_dual_algebra, double_dual_dims, gabriel_presentation, h_regrade_gamma, ExtAlgebra,
    GabrielPresentation,
};
use crate::matching::match_presentations;
use crate::presentation::{parse_presentation, AlgebraPresentation};
use crate::quasi_hereditary::{
    check_quasi_hereditary, verify_bgg_reciprocity, verify_delta_nabla_orthogonality,
    StandardFamily,
};
use crate::resolution::{default_n_max, is_classical_koszul, linearity_verdict, minimal_resolution};

pub const SCHEMA: &str = "qhk-report/1";

/// Stage names with their dependencies, in a topological order.
pub const STAGES: &[(&str, &[&str])] = &[
    ("parse", &[]),
    ("build", &["parse"]),
    ("duality", &["build"]),
    ("quasi_hereditary", &["build"]),
    ("bgg", &["quasi_hereditary", "duality"]),
    ("delta_nabla_orthogonal", &["quasi_hereditary"]),
    ("classical_koszul", &["build"]),
    ("standard_koszul", &["quasi_hereditary"]),
    ("height_function", &["quasi_hereditary"]),
    ("condition_H", &["height_function"]),
    ("delta_regrade", &["condition_H"]),
    ("degree_zero_iso", &["delta_regrade"]),
    ("delta_self_orthogonal", &["degree_zero_iso", "standard_koszul"]),
    ("prop_kazh", &["delta_self_orthogonal"]),
    ("gamma_built", &["delta_self_orthogonal"]),
    ("gamma_directed", &["gamma_built"]),
    ("gamma_koszul", &["gamma_built"]),
    ("costandard_simple", &["delta_self_orthogonal"]),
    ("double_dual_dims", &["gamma_built"]),
    ("double_dual_algebra", &["gamma_built"]),
    ("gamma_relations_match", &["gamma_built"]),
];

fn deps_of(name: &str) -> &'static [&'static str] {
    STAGES.iter().find(|(n, _)| *n == name).map_or(&[], |(_, d)| d)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "blocked")]
    Blocked,
    #[serde(rename = "n/a")]
    NotApplicable,
    #[serde(rename = "skipped")]
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Blocked => "blocked",
            Status::NotApplicable => "n/a",
            Status::Skipped => "skipped",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub name: String,
    pub status: Status,
    pub summary: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Tables and objects worth printing, filled in as stages succeed.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ReportData {
    pub vertices: Option<usize>,
    pub arrows: Option<usize>,
    pub relations: Option<usize>,
    pub dim: Option<usize>,
    /// `dim Λ_l` in the length grading.
    pub graded_dims: Option<Vec<usize>>,
    pub cartan: Option<Vec<Vec<i64>>>,
    pub delta_dims: Option<Vec<usize>>,
    /// `[j][l][i] = [(Δ_j)_l : S_i]`.
    pub delta_layers: Option<Vec<Vec<Vec<usize>>>>,
    pub standard_resolutions: Option<Vec<String>>,
    pub height: Option<Vec<i64>>,
    pub delta_graded_dims: Option<Vec<usize>>,
    pub delta_arrow_degrees: Option<Vec<(String, i64)>>,
    pub gamma_dim: Option<usize>,
    pub gamma_ext_dims: Option<Vec<usize>>,
    pub gamma_h_dims: Option<Vec<usize>>,
    pub gamma_presentation: Option<String>,
    pub double_dual_dims: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub schema: &'static str,
    pub input: String,
    pub field: String,
    pub n_max: Option<usize>,
    pub verdict: String,
    pub stages: Vec<StageReport>,
    pub data: ReportData,
}

impl PipelineReport {
    pub fn stage(&self, name: &str) -> Option<&StageReport> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn status(&self, name: &str) -> Option<Status> {
        self.stage(name).map(|s| s.status)
    }

    /// The input could not be parsed or built.
    pub fn input_error(&self) -> bool {
        matches!(self.status("parse"), Some(Status::Fail))
    }

    pub fn all_passed(&self) -> bool {
        !self.stages.iter().any(|s| s.status == Status::Fail)
    }

    /// `0` when every stage that ran passed, `2` on a failed verdict and
    /// `1` on unusable input.
    pub fn exit_code(&self) -> i32 {
        if self.input_error() {
            1
        } else if self.all_passed() {
            0
        } else {
            2
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        render_text(self)
    }
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    /// Name shown in the report.
    pub input: String,
    /// Truncation length for the basis enumeration.
    pub max_len: Option<usize>,
    /// Resolution depth; defaults to `dim Λ`.
    pub n_max: Option<usize>,
    /// Run only these stages and their dependencies.
    pub stages: Option<Vec<String>>,
    /// Reference presentation for Γ, compared by relation matching.
    pub expected_gamma: Option<String>,
}

/// Everything computed along the way, for callers that need more than the
/// report (the `gamma` command, tests).
pub struct Analysis<F: Field> {
    pub presentation: Option<AlgebraPresentation>,
    pub algebra: Option<Arc<GradedAlgebra<F>>>,
    pub family: Option<StandardFamily<F>>,
    pub height: Option<HeightFunction>,
    pub grading: Option<DeltaGrading<F>>,
    pub resolutions: Option<DeltaResolutions<F>>,
    pub gamma: Option<ExtAlgebra<F>>,
    pub gabriel: Option<GabrielPresentation>,
}

impl<F: Field> Default for Analysis<F> {
    fn default() -> Self {
        Analysis {
            presentation: None,
            algebra: None,
            family: None,
            height: None,
            grading: None,
            resolutions: None,
            gamma: None,
            gabriel: None,
        }
    }
}

struct Outcome {
    status: Status,
    summary: String,
    detail: Value,
}

fn outcome(ok: bool, summary: impl Into<String>, detail: impl Serialize) -> Outcome {
    Outcome {
        status: Status::from_bool(ok),
        summary: summary.into(),
        detail: serde_json::to_value(detail).unwrap_or(Value::Null),
    }
}

fn not_applicable(summary: impl Into<String>) -> Outcome {
    Outcome {
        status: Status::NotApplicable,
        summary: summary.into(),
        detail: Value::Null,
    }
}

fn tuple<T: std::fmt::Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// The stages to run: the requested ones and everything they depend on.
fn selected(requested: &Option<Vec<String>>) -> Result<Vec<bool>> {
    let Some(req) = requested else {
        return Ok(vec![true; STAGES.len()]);
    };
    let mut keep = vec![false; STAGES.len()];
    let mut stack: Vec<&str> = Vec::new();
    for r in req {
        let name = STAGES
            .iter()
            .map(|(n, _)| *n)
            .find(|n| n.eq_ignore_ascii_case(r.trim()))
            .ok_or_else(|| Error::Presentation(format!("unknown stage `{r}`")))?;
        stack.push(name);
    }
    while let Some(n) = stack.pop() {
        let i = STAGES.iter().position(|(m, _)| *m == n).unwrap();
        if !keep[i] {
            keep[i] = true;
            stack.extend_from_slice(deps_of(n));
        }
    }
    Ok(keep)
}

/// Runs the stage graph on presentation text over `field`.
pub fn run_pipeline<F: Field>(
    field: &F,
    source: &str,
    opts: &PipelineOptions,
) -> Result<(PipelineReport, Analysis<F>)> {
    let keep = selected(&opts.stages)?;
    let mut run = Runner {
        field: field.clone(),
        source: source.to_string(),
        opts: opts.clone(),
        n_max: opts.n_max,
        an: Analysis::default(),
        data: ReportData::default(),
    };
    let mut stages: Vec<StageReport> = Vec::new();
    for (i, (name, deps)) in STAGES.iter().enumerate() {
        if !keep[i] {
            stages.push(StageReport {
                name: name.to_string(),
                status: Status::Skipped,
                summary: "not requested".into(),
                detail: Value::Null,
                elapsed: Duration::ZERO,
            });
            continue;
        }
        let dep_status: Vec<(&str, Status)> = deps
            .iter()
            .map(|d| (*d, stages.iter().find(|s| s.name == *d).unwrap().status))
            .collect();
        let blocking: Vec<&str> = dep_status
            .iter()
            .filter(|(_, s)| matches!(s, Status::Fail | Status::Blocked | Status::Skipped))
            .map(|(d, _)| *d)
            .collect();
        let start = Instant::now();
        let out = if !blocking.is_empty() {
            Outcome {
                status: Status::Blocked,
                summary: format!("blocked by {}", blocking.join(", ")),
                detail: Value::Null,
            }
        } else if let Some((d, _)) = dep_status.iter().find(|(_, s)| *s == Status::NotApplicable) {
            not_applicable(format!("requires {d}"))
        } else {
            match run.stage(name) {
                Ok(o) => o,
                Err(e) => Outcome {
                    status: Status::Fail,
                    summary: e.to_string(),
                    detail: Value::Null,
                },
            }
        };
        stages.push(StageReport {
            name: name.to_string(),
            status: out.status,
            summary: out.summary,
            detail: out.detail,
            elapsed: start.elapsed(),
        });
    }
    let mut report = PipelineReport {
        schema: SCHEMA,
        input: opts.input.clone(),
        field: field.name(),
        n_max: run.n_max,
        verdict: String::new(),
        stages,
        data: run.data,
    };
    report.verdict = match report.exit_code() {
        0 => "pass",
        1 => "input-error",
        _ => "fail",
    }
    .to_string();
    Ok((report, run.an))
}

struct Runner<F: Field> {
    field: F,
    source: String,
    opts: PipelineOptions,
    n_max: Option<usize>,
    an: Analysis<F>,
    data: ReportData,
}

fn missing(what: &str) -> Error {
    Error::Internal(format!("{what} unavailable"))
}

impl<F: Field> Runner<F> {
    fn alg(&self) -> Result<&Arc<GradedAlgebra<F>>> {
        self.an.algebra.as_ref().ok_or_else(|| missing("algebra"))
    }
    fn family(&self) -> Result<&StandardFamily<F>> {
        self.an.family.as_ref().ok_or_else(|| missing("standard modules"))
    }
    fn height(&self) -> Result<&HeightFunction> {
        self.an.height.as_ref().ok_or_else(|| missing("height function"))
    }
    fn grading(&self) -> Result<&DeltaGrading<F>> {
        self.an.grading.as_ref().ok_or_else(|| missing("Δ-grading"))
    }
    fn resolutions(&self) -> Result<&DeltaResolutions<F>> {
        self.an.resolutions.as_ref().ok_or_else(|| missing("Δ resolutions"))
    }
    fn gamma(&self) -> Result<(&ExtAlgebra<F>, &GabrielPresentation)> {
        match (&self.an.gamma, &self.an.gabriel) {
            (Some(g), Some(p)) => Ok((g, p)),
            _ => Err(missing("Γ")),
        }
    }
    fn n(&self) -> usize {
        self.n_max.unwrap_or(0)
    }

    fn stage(&mut self, name: &str) -> Result<Outcome> {
        match name {
            "parse" => self.parse(),
            "build" => self.build(),
            "duality" => self.duality(),
            "quasi_hereditary" => self.quasi_hereditary(),
            "bgg" => self.bgg(),
            "delta_nabla_orthogonal" => self.orthogonal(),
            "classical_koszul" => self.classical_koszul(),
            "standard_koszul" => self.standard_koszul(),
            "height_function" => self.height_function(),
            "condition_H" => self.condition_h(),
            "delta_regrade" => self.delta_regrade(),
            "degree_zero_iso" => self.degree_zero(),
            "delta_self_orthogonal" => self.self_orthogonal(),
            "prop_kazh" => self.prop_kazh(),
            "gamma_built" => self.gamma_built(),
            "gamma_directed" => self.gamma_directed(),
            "gamma_koszul" => self.gamma_koszul(),
            "costandard_simple" => self.costandard(),
            "double_dual_dims" => self.double_dual_dims(),
            "double_dual_algebra" => self.double_dual_algebra(),
            "gamma_relations_match" => self.relations_match(),
            other => Err(Error::Internal(format!("no stage `{other}`"))),
        }
    }

    fn parse(&mut self) -> Result<Outcome> {
        let p = parse_presentation(&self.source)?;
        let summary = format!(
            "{} vertices, {} arrows, {} relations{}",
            p.vertex_count,
            p.arrows.len(),
            p.relations.len(),
            if p.duality.is_some() { ", duality declared" } else { "" }
        );
        self.data.vertices = Some(p.vertex_count);
        self.data.arrows = Some(p.arrows.len());
        self.data.relations = Some(p.relations.len());
        self.an.presentation = Some(p);
        Ok(outcome(true, summary, Value::Null))
    }

    fn build(&mut self) -> Result<Outcome> {
        let p = self.an.presentation.as_ref().ok_or_else(|| missing("presentation"))?;
        let alg = Arc::new(GradedAlgebra::build(&self.field, p, self.opts.max_len)?);
        let assoc = alg.check_associativity();
        let n = *self.n_max.get_or_insert_with(|| default_n_max(&alg));
        let dims = alg.graded_dim_vector();
        let summary = match assoc {
            Ok(()) => format!("dim {} graded {}; resolution depth {n}", alg.dim(), tuple(&dims)),
            Err((a, b, c)) => format!("multiplication not associative on basis ({a},{b},{c})"),
        };
        self.data.dim = Some(alg.dim());
        self.data.graded_dims = Some(dims);
        self.data.cartan = Some(alg.cartan_matrix());
        self.an.algebra = Some(alg);
        Ok(outcome(assoc.is_ok(), summary, Value::Null))
    }

    fn duality(&mut self) -> Result<Outcome> {
        let alg = self.alg()?;
        if !alg.has_duality() {
            return Ok(not_applicable("no duality declared"));
        }
        let v = validate_duality(alg)?;
        let summary = match &v.reason {
            Some(r) => r.clone(),
            None => "anti-involution preserves the relations".into(),
        };
        Ok(outcome(v.passed, summary, &v))
    }

    fn quasi_hereditary(&mut self) -> Result<Outcome> {
        let alg = self.alg()?.clone();
        let family = StandardFamily::new(&alg)?;
        let v = check_quasi_hereditary(&alg, &family)?;
        let dims = family.delta_dims();
        let summary = if v.passed {
            format!("Δ dims {}", tuple(&dims))
        } else if let Some(ob) = v.obstructions.first() {
            format!("{}: {}", ob.module, ob.message)
        } else {
            format!("End(Δ) dims {}", tuple(&v.end_dims))
        };
        self.data.delta_dims = Some(dims);
        self.data.delta_layers = Some(family.layer_table());
        self.an.family = Some(family);
        Ok(outcome(v.passed, summary, &v))
    }

    fn bgg(&mut self) -> Result<Outcome> {
        let alg = self.alg()?.clone();
        let family = self.family()?;
        let qh = check_quasi_hereditary(&alg, family)?;
        let v = verify_bgg_reciprocity(family, &qh);
        let summary = format!(
            "(P_i : Δ_j) {} [Δ_j : S_i]{}",
            if v.passed { "=" } else { "≠" },
            if v.multiplicity_free { ", multiplicity free" } else { ", not multiplicity free" }
        );
        Ok(outcome(v.passed, summary, &v))
    }

    fn orthogonal(&mut self) -> Result<Outcome> {
        let n = self.n();
        let v = verify_delta_nabla_orthogonality(self.family()?, n)?;
        let summary = format!(
            "Hom(Δ_i, ∇_j) = δ_ij, higher Ext checked to degree {}, {} violations",
            v.max_degree_checked,
            v.violations.len()
        );
        Ok(outcome(v.passed, summary, &v))
    }

    fn classical_koszul(&mut self) -> Result<Outcome> {
        let n = self.n();
        let v = is_classical_koszul(self.alg()?, n)?;
        let bad: Vec<&str> = v.modules.iter().filter(|e| !e.linear).map(|e| e.label.as_str()).collect();
        let summary = if bad.is_empty() {
            "all simple modules have linear resolutions".into()
        } else {
            format!("nonlinear: {}", bad.join(", "))
        };
        Ok(outcome(v.passed, summary, &v))
    }

    fn standard_koszul(&mut self) -> Result<Outcome> {
        let n = self.n();
        let family = self.family()?;
        let res = family
            .deltas
            .iter()
            .map(|d| minimal_resolution(d, n))
            .collect::<Result<Vec<_>>>()?;
        let v = linearity_verdict(&res);
        let complete = res.iter().all(|r| r.complete);
        self.data.standard_resolutions = Some(res.iter().map(|r| r.display()).collect());
        let summary = if !complete {
            format!("a resolution did not terminate within {n} steps")
        } else if v.passed {
            "standard modules have linear resolutions".into()
        } else {
            let e = v.modules.iter().find(|e| !e.linear).unwrap();
            format!("{} is not linear", e.label)
        };
        Ok(outcome(v.passed && complete, summary, &v))
    }

    fn height_function(&mut self) -> Result<Outcome> {
        let alg = self.alg()?;
        match find_height_function(alg, self.family()?) {
            HeightOutcome::Found(h) => {
                let summary = format!("h = {}", tuple(&h.values));
                self.data.height = Some(h.values.clone());
                let out = outcome(true, summary, &h);
                self.an.height = Some(h);
                Ok(out)
            }
            HeightOutcome::Contradiction(c) => Ok(outcome(
                false,
                format!("{} (cycle of {} constraints, defect {})", c.message, c.cycle.len(), c.defect),
                &c,
            )),
        }
    }

    fn condition_h(&mut self) -> Result<Outcome> {
        let v = check_condition_h(self.family()?, &self.height()?.values);
        let summary = if v.passed {
            "every [(Δ_j)_l : S_i] ≠ 0 has h(i) = h(j) - l".to_string()
        } else {
            format!("{} violations", v.violations.len())
        };
        Ok(outcome(v.passed, summary, &v))
    }

    fn delta_regrade(&mut self) -> Result<Outcome> {
        let alg = self.alg()?.clone();
        let h = self.height()?.clone();
        let dg = delta_regrade(&alg, &h.values)?;
        let bound = 3 * alg.vertex_count() as i64;
        let u = height_uniqueness(&alg, self.family()?, &h, bound)?;
        let dims = dg.dims();
        let summary = format!(
            "Δ-graded dims {}; {} heights up to {} give the same grading",
            tuple(&dims),
            u.solutions,
            bound
        );
        self.data.delta_graded_dims = Some(dims);
        self.data.delta_arrow_degrees = Some(dg.arrow_degrees());
        self.an.grading = Some(dg);
        Ok(outcome(u.passed, summary, &u))
    }

    fn degree_zero(&mut self) -> Result<Outcome> {
        let v = verify_degree_zero_isomorphism(self.grading()?, self.family()?)?;
        let summary = format!("dim Λ_[0] = {}, dim Δ = {}", v.degree_zero_dim, v.delta_dim);
        Ok(outcome(v.passed, summary, &v))
    }

    fn self_orthogonal(&mut self) -> Result<Outcome> {
        let n = self.n();
        let res = delta_resolutions(self.grading()?, self.family()?, n)?;
        let v = check_delta_self_orthogonality(self.grading()?, &res)?;
        let summary = if v.passed {
            format!(
                "Ext^n(Δ, Δ⟨s⟩) = 0 for n ≠ s; gldim Λ_[0] = {}",
                v.degree_zero_gldim.unwrap_or(0)
            )
        } else if !v.resolutions_complete {
            format!("a Δ-graded resolution did not terminate within {n} steps")
        } else if v.degree_zero_gldim.is_none() {
            "Λ_[0] has infinite global dimension".into()
        } else {
            format!("{} off-diagonal Ext groups", v.violations.len())
        };
        self.an.resolutions = Some(res);
        Ok(outcome(v.passed, summary, &v))
    }

    fn prop_kazh(&mut self) -> Result<Outcome> {
        let n = self.n();
        let v = verify_prop_kazh(self.grading()?, self.family()?, self.resolutions()?, n)?;
        let summary = format!(
            "Ext to simples diagonal: {}, Δ-linear: {}, cogenerated in degree 0: {}",
            v.part_a,
            v.part_b,
            v.part_c.map_or("n/a".to_string(), |c| c.to_string())
        );
        Ok(outcome(v.passed, summary, &v))
    }

    fn gamma_built(&mut self) -> Result<Outcome> {
        let gamma = build_gamma(self.resolutions()?)?;
        let h = self.height()?.values.clone();
        let gp = gabriel_presentation(&gamma, &h)?;
        let assoc = gamma.check_associativity().is_ok();
        let p = &gp.presentation;
        let summary = format!(
            "dim Γ = {}, Ext-graded {}; {} arrows, {} relations",
            gamma.dim(),
            tuple(&gamma.ext_dims()),
            p.arrows.len(),
            p.relations.len()
        );
        self.data.gamma_dim = Some(gamma.dim());
        self.data.gamma_ext_dims = Some(gamma.ext_dims());
        self.data.gamma_presentation = Some(gp.to_text());
        let ok = assoc && gp.sound;
        let detail = serde_json::json!({ "associative": assoc, "presentation_sound": gp.sound });
        self.an.gamma = Some(gamma);
        self.an.gabriel = Some(gp);
        Ok(outcome(ok, summary, detail))
    }

    fn gamma_directed(&mut self) -> Result<Outcome> {
        let (gamma, _) = self.gamma()?;
        let h = &self.height()?.values;
        let d = check_directed(gamma, h);
        let g = h_regrade_gamma(gamma, h);
        let summary = format!("deg_H dims {}", tuple(&g.dims));
        self.data.gamma_h_dims = Some(g.dims.clone());
        let detail = serde_json::json!({ "directed": d, "h_grading": g });
        Ok(outcome(d.passed && g.passed, summary, detail))
    }

    fn gamma_koszul(&mut self) -> Result<Outcome> {
        let (_, gp) = self.gamma()?;
        let v = check_gamma_classical_koszul(&self.field, gp, &self.height()?.values)?;
        let summary = if v.passed {
            "Ext^w(S_i, S_j) = 0 unless w = h(i) - h(j)".to_string()
        } else if let Some(r) = &v.reason {
            r.clone()
        } else {
            format!("{} off-diagonal Ext groups", v.violations.len())
        };
        Ok(outcome(v.passed, summary, &v))
    }

    fn costandard(&mut self) -> Result<Outcome> {
        let v = costandard_to_simple_check(self.grading()?, self.family()?, self.resolutions()?)?;
        let homs: Vec<usize> = v.entries.iter().map(|e| e.hom_dim).collect();
        let stray: usize = v.entries.iter().map(|e| e.stray.len()).sum();
        let summary = format!("dim Hom(Δ, ∇_i) = {}, {stray} stray Ext groups", tuple(&homs));
        Ok(outcome(v.passed, summary, &v))
    }

    fn double_dual_dims(&mut self) -> Result<Outcome> {
        let (gamma, gp) = self.gamma()?;
        let v = double_dual_dims(gamma, gp, self.grading()?, self.resolutions()?)?;
        let summary = format!(
            "dim Ext^n_Γ(DΔ, DΔ) = {}, dim Λ_[n] = {}",
            tuple(&v.ext_dims),
            tuple(&v.expected)
        );
        self.data.double_dual_dims = Some(v.ext_dims.clone());
        Ok(outcome(v.passed, summary, &v))
    }

    fn double_dual_algebra(&mut self) -> Result<Outcome> {
        if self.field.name() != "Q" {
            return Ok(not_applicable("presentation matching is over Q"));
        }
        let (gamma, gp) = self.gamma()?;
        let dd = double_dual_algebra(gamma, gp, self.grading()?, self.resolutions()?)?;
        let c = &dd.comparison;
        let summary = if c.matched {
            "[Ext*_Γ(DΔ, DΔ)]^op has the quiver and relations of Λ".to_string()
        } else {
            c.reason.clone().unwrap_or_else(|| "presentations differ".into())
        };
        Ok(outcome(c.matched, summary, c))
    }

    fn relations_match(&mut self) -> Result<Outcome> {
        let Some(text) = &self.opts.expected_gamma else {
            return Ok(not_applicable("no reference presentation"));
        };
        if self.field.name() != "Q" {
            return Ok(not_applicable("presentation matching is over Q"));
        }
        let theirs = parse_presentation(text)?;
        let (_, gp) = self.gamma()?;
        let c = match_presentations(&gp.presentation, &theirs)?;
        let summary = if c.matched {
            "relation space agrees with the reference after arrow identification".to_string()
        } else {
            c.reason.clone().unwrap_or_else(|| "relation spaces differ".into())
        };
        Ok(outcome(c.matched, summary, &c))
    }
}

/// `S1 S2 S2` for a composition-factor row.
fn layer_row(row: &[usize]) -> String {
    let mut parts = Vec::new();
    for (i, &m) in row.iter().enumerate() {
        for _ in 0..m {
            parts.push(format!("S{}", i + 1));
        }
    }
    parts.join(" ")
}

fn render_text(r: &PipelineReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}  (over {}, verdict {})", r.input, r.field, r.verdict);
    let width = STAGES.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    for st in &r.stages {
        if st.status == Status::Skipped {
            continue;
        }
        let _ = writeln!(
            s,
            "  {:width$}  {:8} {:>8.1?}  {}",
            st.name,
            st.status.as_str(),
            st.elapsed,
            st.summary
        );
    }
    let d = &r.data;
    if let (Some(dim), Some(g)) = (d.dim, &d.graded_dims) {
        let _ = writeln!(s, "\ndim Λ = {dim}, length-graded {}", tuple(g));
    }
    if let Some(layers) = &d.delta_layers {
        let _ = writeln!(s, "\nstandard modules, top layer first:");
        for (j, rows) in layers.iter().enumerate() {
            for (l, row) in rows.iter().enumerate() {
                let head = if l == 0 { format!("Δ{}", j + 1) } else { String::new() };
                let _ = writeln!(s, "  {head:4} {}", layer_row(row));
            }
        }
    }
    if let Some(res) = &d.standard_resolutions {
        let _ = writeln!(s, "\nresolutions of the standard modules:");
        for line in res {
            let _ = writeln!(s, "  {line}");
        }
    }
    if let Some(h) = &d.height {
        let _ = writeln!(s, "\nh = {}", tuple(h));
    }
    if let Some(g) = &d.delta_graded_dims {
        let _ = writeln!(s, "Δ-graded dims {}", tuple(g));
    }
    if let Some(degs) = &d.delta_arrow_degrees {
        let parts: Vec<String> = degs.iter().map(|(a, k)| format!("{a}:{k}")).collect();
        let _ = writeln!(s, "Δ-degrees of arrows: {}", parts.join(" "));
    }
    if let (Some(dim), Some(e)) = (d.gamma_dim, &d.gamma_ext_dims) {
        let _ = write!(s, "\ndim Γ = {dim}, Ext-graded {}", tuple(e));
        if let Some(hd) = &d.gamma_h_dims {
            let _ = write!(s, ", deg_H {}", tuple(hd));
        }
        let _ = writeln!(s);
    }
    if let Some(p) = &d.gamma_presentation {
        let _ = writeln!(s, "\nΓ:");
        for line in p.lines() {
            let _ = writeln!(s, "  {line}");
        }
    }
    s
}
