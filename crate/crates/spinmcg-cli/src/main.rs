//! `spinmcg`: bases, primitives, verification suites, map values, Poincaré
//! series and the stable Betti table.
//!
//! Exit codes: 0 on success, 1 when a verification fails or a computation
//! errors, 2 on usage errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use spinmcg::dyer_lashof::QGenerator;
use spinmcg::loopspace::{self, LoopModel};
use spinmcg::maps::{self, BettiTable, TailPolicy};
use spinmcg::qhopf::afunctor::a_functor_dims;
use spinmcg::qhopf::{Normalization, QAlgebra};
use spinmcg::space::{SpaceClass, SpaceId};
use spinmcg::verify::{self, Report, Target};

/// Upper limit for `--max-degree` unless raised by this variable.
const CEILING_VAR: &str = "SPINMCG_MAX_DEGREE";
const DEFAULT_CEILING: u32 = 16;
/// Directory for cached Betti tables.
const CACHE_VAR: &str = "SPINMCG_CACHE_DIR";

#[derive(Parser)]
#[command(name = "spinmcg", version, about = "Mod-2 homology of free infinite loop spaces and the stable spin mapping class group")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Monomial basis of H_*(Q_0 X_+) in one degree, or its dimensions.
    Basis {
        #[arg(long, default_value = "rp-inf", value_parser = parse_space)]
        space: SpaceId,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
    },
    /// Primitives in one degree, or their dimensions.
    Primitives {
        #[arg(long, default_value = "rp-inf", value_parser = parse_space)]
        space: SpaceId,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
    },
    /// Run verification suites; all of them when no target is given.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(Target::ids()))]
        target: Option<String>,
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
    },
    /// Evaluate one of the maps on a generator.
    MapEval {
        #[arg(long, value_enum)]
        map: MapKind,
        #[arg(long)]
        index: u32,
        /// Dyer-Lashof word, outermost first, e.g. `6,2`.
        #[arg(long, value_delimiter = ',')]
        word: Vec<u32>,
        #[arg(long, default_value = "primitive")]
        tail: TailPolicy,
    },
    /// Poincaré series of H_*(Q_0 X_+), or of a loop-space model of Q_0 RP^∞_+.
    Poincare {
        #[arg(long, default_value = "rp-inf", value_parser = parse_space)]
        space: SpaceId,
        /// Number of loops (0, 1 or 2; loops need `--space rp-inf`).
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=2))]
        loops: u8,
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
    },
    /// Stable mod-2 Betti numbers of the spin mapping class group.
    Betti {
        #[arg(long, default_value_t = 12)]
        max_degree: u32,
        #[arg(long, default_value = "primitive")]
        tail: TailPolicy,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MapKind {
    Partial,
    Transfer,
    Composite,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("--max-degree {0} exceeds the ceiling {1} (raise it with {CEILING_VAR})")]
    Ceiling(u32, u32),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Verify(#[from] verify::VerifyError),
    #[error(transparent)]
    Map(#[from] maps::MapError),
    #[error(transparent)]
    Loop(#[from] loopspace::LoopError),
    #[error(transparent)]
    Algebra(#[from] spinmcg::qhopf::AlgebraError),
    #[error("cache: {0}")]
    Cache(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Ceiling(..) | CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn parse_space(s: &str) -> Result<SpaceId, String> {
    s.parse()
}

fn ceiling() -> u32 {
    std::env::var(CEILING_VAR).ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_CEILING)
}

fn check_ceiling(n: u32) -> Result<u32, CliError> {
    let c = ceiling();
    if n > c {
        Err(CliError::Ceiling(n, c))
    } else {
        Ok(n)
    }
}

fn plus(space: SpaceId) -> &'static QAlgebra {
    QAlgebra::get(space, Normalization::Plus)
}

/// Rows of `(degree, dim)` in the requested format.
fn dims_table(dims: &[usize], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Text => {
            for (n, d) in dims.iter().enumerate() {
                writeln!(out, "{n:>3}  {d}").unwrap();
            }
        }
        Format::Csv => {
            out.push_str("degree,dimension\n");
            for (n, d) in dims.iter().enumerate() {
                writeln!(out, "{n},{d}").unwrap();
            }
        }
        Format::Json => {
            for (n, d) in dims.iter().enumerate() {
                writeln!(out, "{}", json!({"degree": n, "dim": d, "factors": {}})).unwrap();
            }
        }
    }
    out
}

fn element_list(degree: u32, items: &[(String, String)], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Text => {
            for (label, value) in items {
                if label.is_empty() {
                    writeln!(out, "{value}").unwrap();
                } else {
                    writeln!(out, "{label} = {value}").unwrap();
                }
            }
        }
        Format::Csv => {
            out.push_str("degree,label,element\n");
            for (label, value) in items {
                writeln!(out, "{degree},{label},\"{value}\"").unwrap();
            }
        }
        Format::Json => {
            for (label, value) in items {
                writeln!(out, "{}", json!({"degree": degree, "label": label, "element": value})).unwrap();
            }
        }
    }
    out
}

fn basis(space: SpaceId, degree: Option<u32>, max_degree: u32, format: Format) -> Result<String, CliError> {
    let alg = plus(space);
    match degree {
        Some(n) => {
            let b = alg.basis(check_ceiling(n)?);
            let items: Vec<_> = b.monomials().iter().map(|m| (String::new(), m.render())).collect();
            Ok(element_list(n, &items, format))
        }
        None => {
            let dims: Vec<usize> = (0..=check_ceiling(max_degree)?).map(|n| alg.basis(n).dim()).collect();
            Ok(dims_table(&dims, format))
        }
    }
}

fn primitives(space: SpaceId, degree: Option<u32>, max_degree: u32, format: Format) -> Result<String, CliError> {
    let alg = plus(space);
    match degree {
        Some(n) => {
            check_ceiling(n)?;
            let items: Vec<_> = if space == SpaceId::RPinf {
                loopspace::primitive_basis(alg, n)?.into_iter().map(|(l, p)| (l.to_string(), p.render())).collect()
            } else {
                alg.primitive_elements(n).iter().map(|p| (String::new(), p.render())).collect()
            };
            Ok(element_list(n, &items, format))
        }
        None => {
            let dims: Vec<usize> =
                (0..=check_ceiling(max_degree)?).map(|n| if n == 0 { 0 } else { alg.primitives(n).dim() }).collect();
            Ok(dims_table(&dims, format))
        }
    }
}

fn render_report(r: &Report, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string(r).expect("report serializes")).unwrap();
        }
        Format::Text | Format::Csv => {
            let verdict = if r.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{verdict} {} (max degree {})", r.target, r.max_degree).unwrap();
            for c in &r.checks {
                writeln!(out, "  {}/{}  {}", c.passed, c.total, c.name).unwrap();
                for f in &c.failures {
                    writeln!(out, "      failed: {f}").unwrap();
                }
            }
            for (k, v) in &r.facts {
                writeln!(out, "  {k}: {v}").unwrap();
            }
        }
    }
    out
}

/// Runs the targets concurrently and prints them in the fixed target order.
fn verify_targets(target: Option<String>, max_degree: u32, format: Format) -> Result<(String, bool), CliError> {
    let max_degree = check_ceiling(max_degree)?;
    let targets: Vec<Target> = match target {
        Some(t) => vec![t.parse()?],
        None => Target::ALL.to_vec(),
    };
    let reports: Vec<Result<Report, verify::VerifyError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = targets.iter().map(|&t| scope.spawn(move || verify::run(t, max_degree))).collect();
        handles.into_iter().map(|h| h.join().expect("verification thread panicked")).collect()
    });
    let mut out = String::new();
    let mut all = true;
    for r in reports {
        let r = r?;
        all &= r.passed;
        out.push_str(&render_report(&r, format));
    }
    Ok((out, all))
}

fn map_eval(map: MapKind, index: u32, word: &[u32], tail: TailPolicy, format: Format) -> Result<String, CliError> {
    let (input, value) = match map {
        MapKind::Partial => {
            if !word.is_empty() {
                return Err(CliError::Usage("--word applies to --map composite only".into()));
            }
            (format!("abar_{index}"), maps::partial_on_generator(index, tail)?)
        }
        MapKind::Transfer => {
            if !word.is_empty() {
                return Err(CliError::Usage("--word applies to --map composite only".into()));
            }
            (format!("a_{index}"), maps::transfer_iota_plus_c(index))
        }
        MapKind::Composite => {
            let g = QGenerator::new(SpaceClass::new(SpaceId::BSpin3, index), word);
            (g.render(), maps::bspin3_composite(g)?)
        }
    };
    Ok(match format {
        Format::Json => format!("{}\n", json!({"input": input, "value": value.render()})),
        Format::Csv => format!("input,value\n{input},\"{}\"\n", value.render()),
        Format::Text => format!("{input} -> {}\n", value.render()),
    })
}

fn poincare(space: SpaceId, loops: u8, max_degree: u32, format: Format) -> Result<String, CliError> {
    let max_degree = check_ceiling(max_degree)?;
    let dims = match loops {
        0 => (0..=max_degree).map(|n| plus(space).basis(n).dim()).collect(),
        _ if space != SpaceId::RPinf => return Err(CliError::Usage("--loops needs --space rp-inf".into())),
        1 => {
            let m = LoopModel::first(plus(space), max_degree);
            a_functor_dims(&m.presentation()?, max_degree)
        }
        _ => {
            let m = LoopModel::first(plus(space), max_degree + 1).next()?;
            a_functor_dims(&m.presentation()?, max_degree)
        }
    };
    Ok(dims_table(&dims, format))
}

fn cached_betti(tail: TailPolicy, max_degree: u32) -> Result<BettiTable, CliError> {
    let Some(dir) = std::env::var_os(CACHE_VAR).map(PathBuf::from) else {
        return Ok(maps::spin_betti(tail, max_degree)?);
    };
    let path = dir.join(format!("betti-{tail}-{max_degree}.json"));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(table) = serde_json::from_str(&text) {
            return Ok(table);
        }
    }
    let table = maps::spin_betti(tail, max_degree)?;
    std::fs::create_dir_all(&dir).map_err(|e| CliError::Cache(e.to_string()))?;
    let text = serde_json::to_string(&table).expect("table serializes");
    std::fs::write(&path, text).map_err(|e| CliError::Cache(e.to_string()))?;
    Ok(table)
}

fn betti(max_degree: u32, tail: TailPolicy, format: Format) -> Result<String, CliError> {
    let table = cached_betti(tail, check_ceiling(max_degree)?)?;
    if format != Format::Json {
        return Ok(dims_table(&table.dims(), format));
    }
    let mut out = String::new();
    for r in &table.rows {
        let n = r.degree as usize;
        let row = json!({
            "degree": r.degree,
            "dim": r.dim,
            "factors": {
                "kernel": table.kernel_factor[n],
                "xi": table.xi_factor[n],
                "terms": r.terms,
            },
        });
        writeln!(out, "{row}").unwrap();
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(String, bool), CliError> {
    let format = cli.format;
    match cli.command {
        Command::Basis { space, degree, max_degree } => basis(space, degree, max_degree, format).map(|s| (s, true)),
        Command::Primitives { space, degree, max_degree } => {
            primitives(space, degree, max_degree, format).map(|s| (s, true))
        }
        Command::Verify { target, max_degree } => verify_targets(target, max_degree, format),
        Command::MapEval { map, index, word, tail } => map_eval(map, index, &word, tail, format).map(|s| (s, true)),
        Command::Poincare { space, loops, max_degree } => poincare(space, loops, max_degree, format).map(|s| (s, true)),
        Command::Betti { max_degree, tail } => betti(max_degree, tail, format).map(|s| (s, true)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
