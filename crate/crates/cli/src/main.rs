//! `twistcode`: runs the experiments on the twisted-embedding code and writes JSON/CSV
//! reports. Exit status: 0 when every embedded check passes, 1 when a check fails,
//! 2 on an error (reported as JSON with a machine-readable code).

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use twistcode::code::sweep::{self, SpectrumMode};
use twistcode::code::{self, automorphism, bounds, minimality, minwords};
use twistcode::hyperplanes;
use twistcode::{Error, Field, Frobenius, Mat, ProjectiveSystem, Result};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "twistcode", version, about = "Codes from the twisted embedding of the point-hyperplane geometry of PG(n, q)")]
struct Cli {
    /// Field order q = p^t (alternative to --p/--t)
    #[arg(long, global = true, conflicts_with_all = ["p", "t"])]
    q: Option<u32>,
    /// Characteristic
    #[arg(long, global = true, requires = "t")]
    p: Option<u32>,
    /// Extension degree
    #[arg(long, global = true, requires = "p")]
    t: Option<u32>,
    /// Projective dimension n >= 1
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Automorphism index: sigma(x) = x^(p^j), 0 <= j < t
    #[arg(long, global = true, default_value_t = 1)]
    j: u32,
    /// Matrix as rows separated by ';', entries by ','
    #[arg(long, global = true)]
    matrix: Option<String>,
    /// Number of random samples (switches sweeps to sampled mode)
    #[arg(long, global = true)]
    sample: Option<u64>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads for sweeps (0 = all cores); never changes the output
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Scope {
    Exhaustive,
    RankOne,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form [N, k, d]
    Params,
    /// Span dimension of the system; with --format csv, the generator matrix
    System,
    /// theta_M and the weight of c_M for --matrix; with --by-rank, max theta per rank
    Theta {
        #[arg(long)]
        by_rank: bool,
    },
    /// Weight distribution (exhaustive, or sampled with --sample)
    Spectrum,
    /// Type and cardinality of the hyperplane defined by --matrix
    Classify,
    /// Cutting-set check over every ambient hyperplane
    Minimality,
    /// Minimum and second weight characterizations
    Minwords {
        #[arg(long, value_enum)]
        scope: Option<Scope>,
    },
    /// Search for a semi-standard spread type hyperplane
    Spread {
        #[arg(long, default_value_t = hyperplanes::SPREAD_BUDGET)]
        budget: u64,
    },
    /// Fixed-point-free collineation from the extension field
    Fpf,
    /// Automorphism action checks
    Autcheck {
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 1_000)]
        non_kernel: u64,
    },
    /// Line and subspace bounds on the solutions of [xi^sigma] = [xi M]
    Lines {
        /// Random invertible matrices
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Random subspaces per matrix
        #[arg(long, default_value_t = 100)]
        subspaces: u64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Params => "params",
            Command::System => "system",
            Command::Theta { .. } => "theta",
            Command::Spectrum => "spectrum",
            Command::Classify => "classify",
            Command::Minimality => "minimality",
            Command::Minwords { .. } => "minwords",
            Command::Spread { .. } => "spread",
            Command::Fpf => "fpf",
            Command::Autcheck { .. } => "autcheck",
            Command::Lines { .. } => "lines",
        }
    }
}

/// The resolved configuration echoed in every report. The worker count is left out on
/// purpose so that it cannot change the output.
#[derive(Serialize, Debug)]
struct Config {
    q: u32,
    p: u32,
    t: u32,
    modulus: Vec<u32>,
    n: usize,
    j: u32,
    sigma_order: u32,
    s: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample: Option<u64>,
    seed: u64,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    config: &'a Config,
    pass: bool,
    report: T,
}

#[derive(Serialize)]
struct ErrorBody {
    code: &'static str,
    message: String,
}

#[derive(Serialize)]
struct ErrorEnvelope {
    schema_version: u32,
    error: ErrorBody,
}

struct Ctx {
    field: Field,
    sigma: Frobenius,
    config: Config,
}

impl Ctx {
    fn system(&self) -> Result<ProjectiveSystem> {
        ProjectiveSystem::build(self.field.clone(), self.sigma.clone(), self.config.n)
    }

    fn matrix(&self) -> Result<Mat> {
        let text = self
            .config
            .matrix
            .as_deref()
            .ok_or_else(|| Error::Configuration("--matrix".into()))?;
        let m = Mat::parse(&self.field, text)?;
        let side = self.config.n + 1;
        if m.rows() != side || m.cols() != side {
            return Err(Error::Shape(format!("--matrix must be {side}x{side}")));
        }
        Ok(m)
    }
}

/// What a command produced: a verdict and the text to write.
struct Output {
    pass: bool,
    text: String,
}

fn json<T: Serialize>(ctx: &Ctx, command: &str, pass: bool, report: T) -> Output {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        config: &ctx.config,
        pass,
        report,
    };
    let mut text = serde_json::to_string_pretty(&env).expect("serializable report");
    text.push('\n');
    Output { pass, text }
}

fn resolve(cli: &Cli) -> Result<Ctx> {
    let field = match (cli.q, cli.p, cli.t) {
        (Some(q), None, None) => Field::with_order(q)?,
        (None, Some(p), Some(t)) => Field::new(p, t, None)?,
        _ => return Err(Error::Configuration("either --q or both --p and --t".into())),
    };
    if cli.n == 0 {
        return Err(Error::Configuration("--n >= 1".into()));
    }
    let sigma = Frobenius::new(&field, cli.j)?;
    if sigma.is_identity() && !matches!(cli.command, Command::System) {
        return Err(Error::Configuration(
            "j != 0 (j = 0 is accepted only by `system`)".into(),
        ));
    }
    let config = Config {
        q: field.order(),
        p: field.characteristic(),
        t: field.degree(),
        modulus: field.modulus().to_vec(),
        n: cli.n,
        j: cli.j,
        sigma_order: sigma.order(),
        s: sigma.fixed_order(),
        matrix: cli.matrix.clone(),
        sample: cli.sample,
        seed: cli.seed,
    };
    Ok(Ctx { field, sigma, config })
}

#[derive(Serialize)]
struct SystemReport {
    #[serde(rename = "N")]
    length: usize,
    k: usize,
    span_dim: usize,
    generator_rank: usize,
}

#[derive(Serialize)]
struct SpectrumReport {
    #[serde(flatten)]
    table: sweep::SpectrumTable,
    min_nonzero_weight: Option<u64>,
    min_distance: u64,
}

#[derive(Serialize)]
struct WitnessReport<W: Serialize> {
    seed: Option<u64>,
    #[serde(rename = "type")]
    kind: Option<hyperplanes::HyperplaneType>,
    theta: Option<u64>,
    weight: Option<u64>,
    witness: W,
}

fn run(cli: &Cli, ctx: &Ctx) -> Result<Output> {
    let name = cli.command.name();
    let threads = cli.threads;
    let (q, n) = (ctx.field.order() as u64, cli.n as u32);
    Ok(match &cli.command {
        Command::Params => json(ctx, name, true, code::params(q, n, &ctx.sigma)?),
        Command::System => {
            let sys = ctx.system()?;
            if cli.format == Format::Csv {
                return Ok(Output { pass: true, text: sys.generator_csv() });
            }
            let report = SystemReport {
                length: sys.len(),
                k: sys.k(),
                span_dim: sys.span_dim(),
                generator_rank: sys.generator_rank(),
            };
            json(ctx, name, report.generator_rank == report.span_dim, report)
        }
        Command::Theta { by_rank: true } => {
            let rows = sweep::theta_by_rank(&ctx.system()?, threads)?;
            let pass = rows.iter().all(|r| r.within_bound);
            json(ctx, name, pass, rows)
        }
        Command::Theta { by_rank: false } => {
            json(ctx, name, true, code::theta(&ctx.system()?, &ctx.matrix()?)?)
        }
        Command::Spectrum => {
            let sys = ctx.system()?;
            let mode = match cli.sample {
                Some(trials) => SpectrumMode::Sampled { seed: cli.seed, trials },
                None => SpectrumMode::Exhaustive,
            };
            let table = sweep::weight_spectrum(&sys, mode, threads)?;
            let d = code::closed_form_min_distance(q, n, &ctx.sigma)?;
            let min = table.min_nonzero_weight();
            let pass = min.is_none_or(|w| w >= d);
            if cli.format == Format::Csv {
                return Ok(Output { pass, text: table.to_csv() });
            }
            let report = SpectrumReport {
                table,
                min_nonzero_weight: min,
                min_distance: d,
            };
            json(ctx, name, pass, report)
        }
        Command::Classify => {
            let r = hyperplanes::classify(&ctx.system()?, &ctx.matrix()?)?;
            json(ctx, name, r.pass, r)
        }
        Command::Minimality => {
            let r = minimality::is_minimal(&ctx.system()?, threads)?;
            json(ctx, name, r.minimal, r)
        }
        Command::Minwords { scope } => {
            let sys = ctx.system()?;
            if cli.n == 2 && ctx.sigma.is_involutory() {
                if cli.matrix.is_some() {
                    let holds = minwords::min_weight_condition_n2(&sys, &ctx.matrix()?)?;
                    let weight = code::eval_codeword(&sys, &ctx.matrix()?)?.weight();
                    let d = code::closed_form_min_distance(q, n, &ctx.sigma)?;
                    #[derive(Serialize)]
                    struct Single {
                        condition: bool,
                        weight: u64,
                        min_distance: u64,
                    }
                    let pass = holds == (weight == d);
                    json(ctx, name, pass, Single { condition: holds, weight, min_distance: d })
                } else {
                    let r = minwords::min_weight_sweep(&sys, threads)?;
                    json(ctx, name, r.pass, r)
                }
            } else {
                let scope = match scope {
                    Some(Scope::Exhaustive) => minwords::SecondWeightScope::Exhaustive,
                    Some(Scope::RankOne) => minwords::SecondWeightScope::RankOneWithBounds,
                    None if sweep::class_count(&sys) <= sweep::MAX_CLASSES => {
                        minwords::SecondWeightScope::Exhaustive
                    }
                    None => minwords::SecondWeightScope::RankOneWithBounds,
                };
                let r = minwords::second_weight_check(&sys, scope, threads)?;
                json(ctx, name, r.pass, r)
            }
        }
        Command::Spread { budget } => {
            let w = hyperplanes::find_spread(&ctx.field, &ctx.sigma, cli.n, cli.seed, *budget)?;
            let sys = ctx.system()?;
            let c = hyperplanes::classify(&sys, &w.matrix)?;
            let pass = c.pass && w.fixed_point_free && w.involutory && w.is_line_spread;
            let report = WitnessReport {
                seed: Some(cli.seed),
                kind: Some(c.kind),
                theta: Some(c.theta),
                weight: Some(c.weight),
                witness: w,
            };
            json(ctx, name, pass, report)
        }
        Command::Fpf => {
            let w = hyperplanes::find_fpf_collineation(&ctx.field, &ctx.sigma, cli.n)?;
            let sys = ctx.system()?;
            let t = code::theta(&sys, &w.matrix)?;
            let report = WitnessReport {
                seed: None,
                kind: None,
                theta: Some(t.theta),
                weight: Some(t.weight),
                witness: w,
            };
            json(ctx, name, t.theta == 0, report)
        }
        Command::Autcheck { trials, non_kernel } => {
            let r = automorphism::automorphism_check(&ctx.system()?, *trials, *non_kernel, cli.seed)?;
            json(ctx, name, r.pass, r)
        }
        Command::Lines { trials, subspaces } => {
            let sys = ctx.system()?;
            #[derive(Serialize)]
            struct Bounds {
                line: bounds::LineBoundReport,
                subspace: bounds::SubspaceBoundReport,
            }
            let line = bounds::line_bound_check(&sys, *trials, cli.seed)?;
            let subspace = bounds::subspace_bound_check(&sys, *trials, *subspaces, cli.seed)?;
            json(ctx, name, line.pass && subspace.pass, Bounds { line, subspace })
        }
    })
}

fn emit(path: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match resolve(&cli).and_then(|ctx| run(&cli, &ctx)) {
        Ok(out) => {
            if let Err(e) = emit(cli.out.as_ref(), &out.text) {
                eprintln!("twistcode: cannot write output: {e}");
                return ExitCode::from(2);
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let env = ErrorEnvelope {
                schema_version: SCHEMA_VERSION,
                error: ErrorBody {
                    code: e.code(),
                    message: e.to_string(),
                },
            };
            println!("{}", serde_json::to_string_pretty(&env).expect("serializable error"));
            ExitCode::from(2)
        }
    }
}
