use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use qhk_core::fixtures::{expected_gamma, fixture_source};
use qhk_core::oracle::{run_oracles, OracleOptions};
use qhk_core::pipeline::{run_pipeline, PipelineOptions, PipelineReport};
use qhk_core::{Field, PrimeField, Rationals};

#[derive(Parser)]
#[command(name = "qhk", version, about = "Koszul duality checks for graded quasi-hereditary algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check and print the report.
    Analyze {
        /// Files, built-in fixture names, or `-` for stdin.
        #[arg(required = true)]
        inputs: Vec<String>,
        #[command(flatten)]
        common: Common,
        /// Comma-separated stage names; their dependencies run too.
        #[arg(long, value_delimiter = ',')]
        stages: Option<Vec<String>>,
        /// Worker threads when several inputs are given.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
    /// Print the presentation of the standard Koszul dual Γ.
    Gamma {
        input: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the main computations with independent oracles.
    Oracle {
        input: String,
        #[command(flatten)]
        common: Common,
        /// Do not run the bar-resolution comparison.
        #[arg(long)]
        skip_bar: bool,
        /// Largest resolution term the bar oracle may build.
        #[arg(long, default_value_t = qhk_core::bar::DEFAULT_GUARD)]
        guard: usize,
    },
    /// Print the source of a built-in fixture.
    Example { name: String },
}

#[derive(Args, Clone)]
struct Common {
    /// `q` or `p:<prime>`.
    #[arg(long, default_value = "q")]
    field: String,
    /// Longest path enumerated when building the basis.
    #[arg(long)]
    max_degree: Option<usize>,
    /// Resolution depth (default: dim Λ).
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

enum FieldChoice {
    Q,
    P(u64),
}

fn parse_field(s: &str) -> Result<FieldChoice> {
    let s = s.trim().to_ascii_lowercase();
    if s == "q" {
        return Ok(FieldChoice::Q);
    }
    let p = s
        .strip_prefix("p:")
        .ok_or_else(|| anyhow!("field must be `q` or `p:<prime>`, got `{s}`"))?;
    let p: u64 = p.parse().with_context(|| format!("bad prime `{p}`"))?;
    PrimeField::new(p)?;
    Ok(FieldChoice::P(p))
}

struct Input {
    name: String,
    source: String,
    expected_gamma: Option<String>,
}

fn read_input(arg: &str) -> Result<Input> {
    if arg == "-" {
        let mut source = String::new();
        std::io::stdin().read_to_string(&mut source).context("reading stdin")?;
        return Ok(Input { name: "<stdin>".into(), source, expected_gamma: None });
    }
    if Path::new(arg).is_file() {
        let source = std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?;
        return Ok(Input { name: arg.into(), source, expected_gamma: None });
    }
    let source = fixture_source(arg)?;
    Ok(Input {
        name: arg.to_ascii_uppercase(),
        source,
        expected_gamma: expected_gamma(arg).map(str::to_string),
    })
}

fn options(input: &Input, common: &Common, stages: Option<Vec<String>>) -> PipelineOptions {
    PipelineOptions {
        input: input.name.clone(),
        max_len: common.max_degree,
        n_max: common.n_max,
        stages,
        expected_gamma: input.expected_gamma.clone(),
    }
}

fn analyze_one(input: &Input, common: &Common, stages: Option<Vec<String>>) -> Result<PipelineReport> {
    let opts = options(input, common, stages);
    let report = match parse_field(&common.field)? {
        FieldChoice::Q => run_pipeline(&Rationals, &input.source, &opts)?.0,
        FieldChoice::P(p) => run_pipeline(&PrimeField::new(p)?, &input.source, &opts)?.0,
    };
    Ok(report)
}

fn gamma_text<F: Field>(field: &F, input: &Input, common: &Common) -> Result<(String, i32)> {
    let (report, analysis) = run_pipeline(field, &input.source, &options(input, common, None))?;
    if report.input_error() {
        let st = report.stage("parse").unwrap();
        bail!("{}: {}", input.name, st.summary);
    }
    let Some(gp) = analysis.gabriel else {
        let failed: Vec<String> = report
            .stages
            .iter()
            .filter(|s| s.status == qhk_core::pipeline::Status::Fail)
            .map(|s| format!("{}: {}", s.name, s.summary))
            .collect();
        eprintln!("Γ unavailable, pipeline blocked:\n  {}", failed.join("\n  "));
        return Ok((String::new(), 2));
    };
    let text = format!("# Standard Koszul dual of {}\n{}", input.name, gp.to_text());
    Ok((text, 0))
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Example { name } => {
            print!("{}", fixture_source(&name)?);
            Ok(0)
        }
        Command::Analyze { inputs, common, stages, parallel } => {
            parse_field(&common.field)?;
            let inputs = inputs.iter().map(|a| read_input(a)).collect::<Result<Vec<_>>>()?;
            let pool = rayon::ThreadPoolBuilder::new().num_threads(parallel.max(1)).build()?;
            let reports: Vec<PipelineReport> = pool.install(|| {
                inputs
                    .par_iter()
                    .map(|i| analyze_one(i, &common, stages.clone()))
                    .collect::<Result<Vec<_>>>()
            })?;
            match common.format {
                Format::Json if reports.len() == 1 => println!("{}", reports[0].to_json()),
                Format::Json => println!("{}", serde_json::to_string_pretty(&reports)?),
                Format::Text => {
                    let texts: Vec<String> = reports.iter().map(|r| r.to_text()).collect();
                    print!("{}", texts.join("\n"));
                }
            }
            let codes: Vec<i32> = reports.iter().map(|r| r.exit_code()).collect();
            Ok(if codes.contains(&1) { 1 } else { codes.into_iter().max().unwrap_or(0) })
        }
        Command::Gamma { input, common } => {
            let input = read_input(&input)?;
            let (text, code) = match parse_field(&common.field)? {
                FieldChoice::Q => gamma_text(&Rationals, &input, &common)?,
                FieldChoice::P(p) => gamma_text(&PrimeField::new(p)?, &input, &common)?,
            };
            print!("{text}");
            Ok(code)
        }
        Command::Oracle { input, common, skip_bar, guard } => {
            let input = read_input(&input)?;
            // With `p:<prime>` the bar comparison runs over that prime.
            let (prime, bar_over_prime) = match parse_field(&common.field)? {
                FieldChoice::Q => (101, false),
                FieldChoice::P(p) => (p, true),
            };
            let opts = OracleOptions {
                input: input.name.clone(),
                max_len: common.max_degree,
                skip_bar,
                guard,
                prime,
                bar_over_prime,
                ..Default::default()
            };
            let report = run_oracles(&input.source, &opts)?;
            match common.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(if report.agreed() { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
