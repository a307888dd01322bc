//! Cross-checks of the main computations against independent ones: the bar
//! resolution against minimal resolutions, brute-force height search
//! against propagation, and Q against a prime field.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::GradedAlgebra;
use crate::bar::bar_ext_oracle;
use crate::delta::{exhaustive_heights, find_height_function, height_uniqueness, HeightOutcome};
use crate::error::{Error, Result};
use crate::ext::{ext_table, ExtDims};
use crate::field::{Field, PrimeField, Rationals};
use crate::module::simple;
use crate::pipeline::{run_pipeline, PipelineOptions, ReportData};
use crate::presentation::parse_presentation;
use crate::quasi_hereditary::StandardFamily;
use crate::resolution::minimal_resolution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleStatus {
    Agree,
    Disagree,
    /// Not run: too large for the guard, or switched off.
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub status: OracleStatus,
    pub summary: String,
    pub discrepancies: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub schema: &'static str,
    pub input: String,
    pub checks: Vec<OracleCheck>,
}

impl OracleReport {
    pub fn agreed(&self) -> bool {
        self.checks.iter().all(|c| c.status != OracleStatus::Disagree)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}  oracles\n", self.input);
        for c in &self.checks {
            let st = match c.status {
                OracleStatus::Agree => "agree",
                OracleStatus::Disagree => "DISAGREE",
                OracleStatus::Skipped => "skipped",
            };
            let _ = writeln!(s, "  {:8} {:9} {}", c.name, st, c.summary);
            for d in &c.discrepancies {
                let _ = writeln!(s, "      {d}");
            }
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub input: String,
    pub max_len: Option<usize>,
    /// Homological depth compared against the bar resolution.
    pub bar_depth: usize,
    pub guard: usize,
    pub skip_bar: bool,
    /// Prime compared against Q.
    pub prime: u64,
    /// Run the bar comparison over `F_prime` instead of Q.
    pub bar_over_prime: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            input: String::new(),
            max_len: None,
            bar_depth: 2,
            guard: crate::bar::DEFAULT_GUARD,
            skip_bar: false,
            prime: 101,
            bar_over_prime: false,
        }
    }
}

fn check(name: &str, bad: Vec<String>, summary: String) -> OracleCheck {
    OracleCheck {
        name: name.into(),
        status: if bad.is_empty() { OracleStatus::Agree } else { OracleStatus::Disagree },
        summary,
        discrepancies: bad,
    }
}

fn skipped(name: &str, summary: impl Into<String>) -> OracleCheck {
    OracleCheck {
        name: name.into(),
        status: OracleStatus::Skipped,
        summary: summary.into(),
        discrepancies: Vec::new(),
    }
}

/// Runs all oracles. Errors only on unusable input.
pub fn run_oracles(source: &str, opts: &OracleOptions) -> Result<OracleReport> {
    let p = parse_presentation(source)?;
    let alg = Arc::new(GradedAlgebra::build(&Rationals, &p, opts.max_len)?);
    let family = StandardFamily::new(&alg)?;
    let bar = if opts.skip_bar {
        skipped("bar", "switched off")
    } else if opts.bar_over_prime {
        let fp = PrimeField::new(opts.prime)?;
        let alg = Arc::new(GradedAlgebra::build(&fp, &p, opts.max_len)?);
        bar_check(&alg, &StandardFamily::new(&alg)?, opts)?
    } else {
        bar_check(&alg, &family, opts)?
    };
    Ok(OracleReport {
        schema: "qhk-oracle/1",
        input: opts.input.clone(),
        checks: vec![bar, height_check(&alg, &family)?, field_check(source, opts)?],
    })
}

fn restrict(d: &ExtDims, below: usize) -> ExtDims {
    d.iter().filter(|((n, _), _)| *n < below).map(|(k, v)| (*k, *v)).collect()
}

/// `Ext^n(Δ_i, N)` for `N` a standard or simple module. When the guard
/// trips, the depth is lowered until the comparison fits.
fn bar_check<F: Field>(
    alg: &Arc<GradedAlgebra<F>>,
    family: &StandardFamily<F>,
    opts: &OracleOptions,
) -> Result<OracleCheck> {
    let mut last = String::new();
    for depth in (1..=opts.bar_depth).rev() {
        match bar_at_depth(alg, family, depth, opts.guard) {
            Ok((bad, pairs)) => {
                let summary = format!(
                    "{pairs} module pairs over {}, degrees below {}",
                    alg.field().name(),
                    depth + 1
                );
                return Ok(check("bar", bad, summary));
            }
            Err(Error::SizeGuard(msg)) => last = msg,
            Err(e) => return Err(e),
        }
    }
    Ok(skipped("bar", format!("size guard: {last}")))
}

fn bar_at_depth<F: Field>(
    alg: &Arc<GradedAlgebra<F>>,
    family: &StandardFamily<F>,
    depth: usize,
    guard: usize,
) -> Result<(Vec<String>, usize)> {
    let r = alg.vertex_count();
    let simples = (0..r).map(|i| simple(alg, i, 0)).collect::<Result<Vec<_>>>()?;
    let mut bad = Vec::new();
    let mut pairs = 0;
    for m in &family.deltas {
        let res = minimal_resolution(m, depth + 1)?;
        for n in family.deltas.iter().chain(&simples) {
            let (bar, valid) = bar_ext_oracle(m, n, depth, guard)?;
            let mine = restrict(&ext_table(&res, n)?.dims(), valid);
            if mine != bar {
                bad.push(format!("Ext({}, {}): {mine:?} vs bar {bar:?}", m.label(), n.label()));
            }
            pairs += 1;
        }
    }
    Ok((bad, pairs))
}

fn height_check<F: Field>(alg: &Arc<GradedAlgebra<F>>, family: &StandardFamily<F>) -> Result<OracleCheck> {
    let bound = 3 * alg.vertex_count() as i64;
    let mut bad = Vec::new();
    let summary = match find_height_function(alg, family) {
        HeightOutcome::Found(h) => {
            let u = height_uniqueness(alg, family, &h, bound)?;
            if u.solutions == 0 {
                bad.push(format!("propagation found {:?}, search up to {bound} found nothing", h.values));
            }
            if !u.constant_per_component {
                bad.push("search found heights not differing by a constant per component".into());
            }
            if !u.identical_grading {
                bad.push("different heights give different Δ-gradings".into());
            }
            format!("{} solutions up to {bound}, all equivalent to {:?}", u.solutions, h.values)
        }
        HeightOutcome::Contradiction(c) => {
            let sols = exhaustive_heights(alg, family, bound, 1);
            if let Some(s) = sols.first() {
                bad.push(format!("propagation reported a contradiction, search found {s:?}"));
            }
            format!("no height function (defect {}), none up to {bound}", c.defect)
        }
    };
    Ok(check("heights", bad, summary))
}

fn comparable(d: &ReportData) -> Vec<(&'static str, String)> {
    let mut out = vec![
        ("graded dims", format!("{:?}", d.graded_dims)),
        ("Δ dims", format!("{:?}", d.delta_dims)),
        ("Δ layers", format!("{:?}", d.delta_layers)),
        ("resolutions", format!("{:?}", d.standard_resolutions)),
        ("height", format!("{:?}", d.height)),
        ("Δ-graded dims", format!("{:?}", d.delta_graded_dims)),
        ("Γ Ext dims", format!("{:?}", d.gamma_ext_dims)),
        ("Γ deg_H dims", format!("{:?}", d.gamma_h_dims)),
        ("double dual", format!("{:?}", d.double_dual_dims)),
    ];
    out.retain(|(_, v)| v != "None");
    out
}

fn field_check(source: &str, opts: &OracleOptions) -> Result<OracleCheck> {
    let fp = PrimeField::new(opts.prime)?;
    let po = PipelineOptions {
        input: opts.input.clone(),
        max_len: opts.max_len,
        ..Default::default()
    };
    let (q, _) = run_pipeline(&Rationals, source, &po)?;
    let (p, _) = run_pipeline(&fp, source, &po)?;
    let a = comparable(&q.data);
    let b = comparable(&p.data);
    let mut bad = Vec::new();
    for (name, v) in &a {
        match b.iter().find(|(n, _)| n == name) {
            Some((_, w)) if w == v => {}
            Some((_, w)) => bad.push(format!("{name}: {v} over Q, {w} over F_{}", opts.prime)),
            None => bad.push(format!("{name}: missing over F_{}", opts.prime)),
        }
    }
    for (st_q, st_p) in q.stages.iter().zip(&p.stages) {
        let both_apply = ![st_q.status, st_p.status].contains(&crate::pipeline::Status::NotApplicable);
        if both_apply && st_q.status != st_p.status {
            bad.push(format!(
                "{}: {} over Q, {} over F_{}",
                st_q.name,
                st_q.status.as_str(),
                st_p.status.as_str(),
                opts.prime
            ));
        }
    }
    let summary = format!("{} tables and all verdicts compared with F_{}", a.len(), opts.prime);
    Ok(check("fields", bad, summary))
}
