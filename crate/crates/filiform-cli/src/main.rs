//! Command-line driver for the filiform library.
//!
//! Subcommands cover normal forms, distances, conjugacy with verified
//! witnesses, roots, centralizers, the central-defect homomorphism, ball
//! enumeration with a persistent cache, and the conjugacy-length experiment.
//!
//! Exit codes: 0 for affirmative answers, 1 for definite negatives
//! (`NO_ROOT`, `NOT_CONJUGATE`, `NOT_IN_CENTRALIZER`), 2 for usage or
//! resource errors. All output is byte-deterministic for fixed inputs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use filiform::conjugacy::{
    cl_experiment, solve_conjugacy, ExperimentMode, ExperimentOptions, ExperimentRecord,
    shortest_conjugator_in_ball,
};
use filiform::error::Error;
use filiform::metric::{
    exact_distance_with, short_word, size_lower_bound, BallCache, BallOptions, Distance,
};
use filiform::structure::{centralizer, max_root_mod_center, root_exact, zeta, CentralizerKind};
use filiform::{GroupElement, Word};

#[derive(Parser)]
#[command(
    name = "filiform",
    version,
    about = "Exact computation in the model filiform groups Z^d x| Z",
    propagate_version = true
)]
struct Cli {
    /// Rank of the coordinate lattice; inferred from element arguments when
    /// omitted.
    #[arg(short = 'd', long, global = true, env = "FILIFORM_DIM")]
    dim: Option<usize>,

    /// Largest ball radius that distance and shortest-conjugator queries may
    /// enumerate.
    #[arg(long, global = true, default_value_t = 12, env = "FILIFORM_MAX_RADIUS")]
    max_radius: u32,

    /// Memory budget in bytes for ball enumeration.
    #[arg(long, global = true, default_value_t = 2_147_483_648, env = "FILIFORM_MEMORY_CAP")]
    memory_cap: u64,

    /// Directory holding ball cache files.
    #[arg(long, global = true, default_value = ".filiform-cache", env = "FILIFORM_CACHE_DIR")]
    cache_dir: PathBuf,

    /// Seed for randomized experiments.
    #[arg(long, global = true, default_value_t = 15_798_768, env = "FILIFORM_SEED")]
    seed: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain, env = "FILIFORM_FORMAT")]
    format: Format,

    /// Worker threads for ball enumeration; defaults to all cores.
    #[arg(long, global = true, env = "FILIFORM_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    WitnessFamily,
    RandomPairs,
}

#[derive(Subcommand)]
enum Command {
    /// Collect a generator word (letters like `t T a1 A2`) to normal form.
    Nf {
        /// Whitespace-separated letters; lowercase is the generator,
        /// uppercase its inverse.
        word: String,
    },
    /// Distance from the identity: exact within --max-radius, otherwise a
    /// certified lower and upper bound.
    Dist {
        /// Element in normal form, written `dim; t; p1,...,pd`.
        elem: String,
    },
    /// Decide whether two elements are conjugate; print a verified witness.
    Conj {
        /// Left-hand element `u`.
        #[arg(long)]
        u: String,
        /// Right-hand element `v`, tested against `x^{-1} u x = v`.
        #[arg(long)]
        v: String,
        /// Also search the ball of radius --max-radius for the shortest
        /// conjugator.
        #[arg(long)]
        shortest: bool,
    },
    /// Exact p-th root, or the maximal root modulo the center when -p is
    /// omitted.
    Root {
        /// Element in normal form.
        elem: String,
        /// Root exponent.
        #[arg(short = 'p', long, value_parser = clap::value_parser!(u64).range(1..))]
        power: Option<u64>,
    },
    /// Centralizer of an element, as a kind and generating set.
    Cent {
        /// Element in normal form.
        elem: String,
    },
    /// Central defect of a commuting pair, computed one rank up.
    Zeta {
        /// The fixed element.
        #[arg(long)]
        g: String,
        /// An element of its centralizer.
        #[arg(long)]
        x: String,
    },
    /// Enumerate the ball of a given radius, reusing and updating the cache.
    Ball {
        /// Ball radius.
        #[arg(long)]
        radius: u32,
        /// Also export the ball as CSV to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Skip reading and writing cache files.
        #[arg(long)]
        no_cache: bool,
    },
    /// Conjugacy-length experiment: solve pairs of growing size and report
    /// witness lengths.
    Clx {
        /// Input-generation mode.
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Comma-separated sizes to sample.
        #[arg(long, value_delimiter = ',', required = true)]
        n_values: Vec<u64>,
        /// Samples per size in random-pairs mode.
        #[arg(long, default_value_t = 5)]
        pairs_per_n: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    // Die silently when a downstream pipe closes, like any other CLI filter,
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: failed to configure {threads} threads: {err}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Nf { word } => cmd_nf(cli, word),
        Command::Dist { elem } => cmd_dist(cli, elem),
        Command::Conj { u, v, shortest } => cmd_conj(cli, u, v, *shortest),
        Command::Root { elem, power } => cmd_root(cli, elem, *power),
        Command::Cent { elem } => cmd_cent(cli, elem),
        Command::Zeta { g, x } => cmd_zeta(cli, g, x),
        Command::Ball {
            radius,
            csv,
            no_cache,
        } => cmd_ball(cli, *radius, csv.as_deref(), *no_cache),
        Command::Clx {
            mode,
            n_values,
            pairs_per_n,
            out,
        } => cmd_clx(cli, *mode, n_values, *pairs_per_n, out.as_deref()),
    }
}

fn parse_element(cli: &Cli, text: &str) -> Result<GroupElement, String> {
    let element: GroupElement = text
        .parse()
        .map_err(|err| format!("invalid element {text:?}: {}", describe(err)))?;
    if let Some(dim) = cli.dim {
        if element.dim() != dim {
            return Err(format!(
                "element {text:?} has rank {}, but --dim is {dim}",
                element.dim()
            ));
        }
    }
    Ok(element)
}

fn describe(err: Error) -> String {
    match err {
        Error::Parse { position, message } => format!("byte {position}: {message}"),
        other => other.to_string(),
    }
}

fn ball_options(cli: &Cli) -> BallOptions {
    BallOptions {
        memory_cap_bytes: cli.memory_cap,
    }
}

fn cache_path(cli: &Cli, dim: usize, radius: u32) -> PathBuf {
    cli.cache_dir.join(format!("ball_d{dim}_r{radius}.bin"))
}

/// The cached ball of the largest radius not exceeding `radius`, if any.
fn best_cached_ball(cli: &Cli, dim: usize, radius: u32) -> Result<Option<BallCache>, String> {
    let mut best: Option<u32> = None;
    for r in (0..=radius).rev() {
        if cache_path(cli, dim, r).exists() {
            best = Some(r);
            break;
        }
    }
    let Some(r) = best else {
        return Ok(None);
    };
    let path = cache_path(cli, dim, r);
    let ball =
        BallCache::load(&path).map_err(|err| format!("cache file {}: {err}", path.display()))?;
    if ball.dim() != dim {
        return Err(format!(
            "cache file {} has rank {}, expected {dim}",
            path.display(),
            ball.dim()
        ));
    }
    Ok(Some(ball))
}

fn emit_csv_row(pairs: &[(&str, String)]) {
    let header: Vec<&str> = pairs.iter().map(|(k, _)| *k).collect();
    let row: Vec<&str> = pairs.iter().map(|(_, v)| v.as_str()).collect();
    println!("{}", header.join(","));
    println!("{}", row.join(","));
}

fn quote(text: &str) -> String {
    format!("\"{text}\"")
}

#[derive(Serialize)]
struct ElementOut {
    word: String,
    length: usize,
    normal_form: String,
    dim: usize,
    t_exp: String,
    a_exps: Vec<String>,
}

fn cmd_nf(cli: &Cli, text: &str) -> Result<ExitCode, String> {
    let dim = cli.dim.unwrap_or(2);
    let word = Word::parse(dim, text)
        .map_err(|err| format!("invalid word {text:?}: {}", describe(err)))?;
    let element = word.eval();
    match cli.format {
        Format::Plain => println!("{element}"),
        Format::Csv => emit_csv_row(&[
            ("word", quote(text)),
            ("length", word.len().to_string()),
            ("normal_form", quote(&element.to_string())),
        ]),
        Format::Json => {
            let out = ElementOut {
                word: text.to_string(),
                length: word.len(),
                normal_form: element.to_string(),
                dim: element.dim(),
                t_exp: element.t_exp().to_string(),
                a_exps: element.a_exps().iter().map(|p| p.to_string()).collect(),
            };
            println!("{}", serde_json::to_string(&out).unwrap());
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct DistanceOut {
    element: String,
    kind: &'static str,
    lower: String,
    upper: String,
}

fn cmd_dist(cli: &Cli, text: &str) -> Result<ExitCode, String> {
    let element = parse_element(cli, text)?;
    let lower_bound = size_lower_bound(&element);
    let word = short_word(&element);
    let searchable = lower_bound <= cli.max_radius.into();
    let distance = if searchable {
        let mut cache = best_cached_ball(cli, element.dim(), cli.max_radius)?
            .unwrap_or_else(|| BallCache::new(element.dim()));
        exact_distance_with(&element, cli.max_radius, &mut cache, &ball_options(cli))
            .map_err(|err| err.to_string())?
    } else {
        Distance::AtLeast(cli.max_radius + 1)
    };
    let out = match distance {
        Distance::Exact(d) => DistanceOut {
            element: element.to_string(),
            kind: "exact",
            lower: d.to_string(),
            upper: d.to_string(),
        },
        Distance::AtLeast(r) => {
            let lower = lower_bound.max(r.into());
            DistanceOut {
                element: element.to_string(),
                kind: "bounds",
                lower: lower.to_string(),
                upper: word.len().to_string(),
            }
        }
    };
    match cli.format {
        Format::Plain => {
            if out.kind == "exact" {
                println!("exact {}", out.lower);
            } else {
                println!("between {} and {}", out.lower, out.upper);
            }
        }
        Format::Csv => emit_csv_row(&[
            ("element", quote(&out.element)),
            ("kind", out.kind.to_string()),
            ("lower", out.lower.clone()),
            ("upper", out.upper.clone()),
        ]),
        Format::Json => println!("{}", serde_json::to_string(&out).unwrap()),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct StageOut {
    level: usize,
    discrepancy: String,
    coarse_steps: String,
    fine_steps: u64,
    lambda: Option<u64>,
    mu: Option<u64>,
}

#[derive(Serialize)]
struct ConjOut {
    conjugate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    conjugator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    word_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stage_log: Option<Vec<StageOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shortest: Option<String>,
}

fn cmd_conj(cli: &Cli, u_text: &str, v_text: &str, shortest: bool) -> Result<ExitCode, String> {
    let u = parse_element(cli, u_text)?;
    let v = parse_element(cli, v_text)?;
    if u.dim() != v.dim() {
        return Err(format!("rank mismatch: {} vs {}", u.dim(), v.dim()));
    }
    let witness = solve_conjugacy(&u, &v);
    let shortest_found = if shortest && witness.is_some() {
        let mut ball = best_cached_ball(cli, u.dim(), cli.max_radius)?
            .unwrap_or_else(|| BallCache::new(u.dim()));
        ball.extend_to(cli.max_radius, &ball_options(cli))
            .map_err(|err| err.to_string())?;
        Some(shortest_conjugator_in_ball(&u, &v, &ball))
    } else {
        None
    };
    let out = match &witness {
        Some(w) => ConjOut {
            conjugate: true,
            conjugator: Some(w.conjugator.to_string()),
            word: Some(w.word.to_string()),
            word_length: Some(w.word_length),
            input_size: Some(w.input_size),
            stage_log: Some(
                w.stage_log
                    .iter()
                    .map(|s| StageOut {
                        level: s.level,
                        discrepancy: s.discrepancy.to_string(),
                        coarse_steps: s.coarse_steps.to_string(),
                        fine_steps: s.fine_steps,
                        lambda: s.lambda,
                        mu: s.mu,
                    })
                    .collect(),
            ),
            shortest: shortest_found.as_ref().map(|found| match found {
                Some(x) => x.to_string(),
                None => format!("none within radius {}", cli.max_radius),
            }),
        },
        None => ConjOut {
            conjugate: false,
            conjugator: None,
            word: None,
            word_length: None,
            input_size: None,
            stage_log: None,
            shortest: None,
        },
    };
    match cli.format {
        Format::Plain => {
            if out.conjugate {
                println!("CONJUGATE");
                println!("{}", serde_json::to_string_pretty(&out).unwrap());
            } else {
                println!("NOT_CONJUGATE");
            }
        }
        Format::Csv => emit_csv_row(&[
            ("conjugate", out.conjugate.to_string()),
            (
                "conjugator",
                out.conjugator.as_deref().map(quote).unwrap_or_default(),
            ),
            (
                "word_length",
                out.word_length.map(|n| n.to_string()).unwrap_or_default(),
            ),
            (
                "input_size",
                out.input_size.map(|n| n.to_string()).unwrap_or_default(),
            ),
        ]),
        Format::Json => println!("{}", serde_json::to_string(&out).unwrap()),
    }
    if out.conjugate {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

#[derive(Serialize)]
struct RootOut {
    root: String,
}

#[derive(Serialize)]
struct MaxRootOut {
    base: String,
    exponent: u64,
    central_offset: u64,
}

fn cmd_root(cli: &Cli, text: &str, power: Option<u64>) -> Result<ExitCode, String> {
    let element = parse_element(cli, text)?;
    match power {
        Some(p) => match root_exact(&element, p) {
            Some(root) => {
                match cli.format {
                    Format::Plain => println!("{root}"),
                    Format::Csv => emit_csv_row(&[("root", quote(&root.to_string()))]),
                    Format::Json => println!(
                        "{}",
                        serde_json::to_string(&RootOut {
                            root: root.to_string()
                        })
                        .unwrap()
                    ),
                }
                Ok(ExitCode::SUCCESS)
            }
            None => {
                println!("NO_ROOT");
                Ok(ExitCode::from(1))
            }
        },
        None => {
            if element.in_lattice() {
                return Err(
                    "maximal root decomposition needs a nonzero t-exponent; pass -p for plain roots"
                        .to_string(),
                );
            }
            let decomposition = max_root_mod_center(&element);
            let out = MaxRootOut {
                base: decomposition.base.to_string(),
                exponent: decomposition.exponent,
                central_offset: decomposition.central_offset,
            };
            match cli.format {
                Format::Plain => {
                    println!("base {}", out.base);
                    println!("exponent {}", out.exponent);
                    println!("central_offset {}", out.central_offset);
                }
                Format::Csv => emit_csv_row(&[
                    ("base", quote(&out.base)),
                    ("exponent", out.exponent.to_string()),
                    ("central_offset", out.central_offset.to_string()),
                ]),
                Format::Json => println!("{}", serde_json::to_string(&out).unwrap()),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Serialize)]
struct CentOut {
    kind: &'static str,
    generators: Vec<String>,
}

fn cmd_cent(cli: &Cli, text: &str) -> Result<ExitCode, String> {
    let element = parse_element(cli, text)?;
    let description = centralizer(&element);
    let kind = match description.kind {
        CentralizerKind::Full => "full",
        CentralizerKind::Lattice => "lattice",
        CentralizerKind::RankTwo => "rank-two",
    };
    let out = CentOut {
        kind,
        generators: description
            .generators
            .iter()
            .map(|g| g.to_string())
            .collect(),
    };
    match cli.format {
        Format::Plain => {
            println!("kind {}", out.kind);
            for g in &out.generators {
                println!("generator {g}");
            }
        }
        Format::Csv => emit_csv_row(&[
            ("kind", out.kind.to_string()),
            ("generators", quote(&out.generators.join("|"))),
        ]),
        Format::Json => println!("{}", serde_json::to_string(&out).unwrap()),
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ZetaOut {
    value: String,
}

fn cmd_zeta(cli: &Cli, g_text: &str, x_text: &str) -> Result<ExitCode, String> {
    let g = parse_element(cli, g_text)?;
    let x = parse_element(cli, x_text)?;
    if g.dim() != x.dim() {
        return Err(format!("rank mismatch: {} vs {}", g.dim(), x.dim()));
    }
    match zeta(&g, &x) {
        Ok(value) => {
            match cli.format {
                Format::Plain => println!("{value}"),
                Format::Csv => emit_csv_row(&[("value", value.to_string())]),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string(&ZetaOut {
                        value: value.to_string()
                    })
                    .unwrap()
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(Error::NotInCentralizer) => {
            println!("NOT_IN_CENTRALIZER");
            Ok(ExitCode::from(1))
        }
        Err(other) => Err(other.to_string()),
    }
}

#[derive(Serialize)]
struct BallOut {
    dim: usize,
    radius: u32,
    count: usize,
    cumulative: Vec<usize>,
}

fn cmd_ball(cli: &Cli, radius: u32, csv: Option<&Path>, no_cache: bool) -> Result<ExitCode, String> {
    let dim = cli.dim.unwrap_or(2);
    let opts = ball_options(cli);
    let mut ball = if no_cache {
        BallCache::new(dim)
    } else {
        best_cached_ball(cli, dim, radius)?.unwrap_or_else(|| BallCache::new(dim))
    };
    ball.extend_to(radius, &opts).map_err(|err| err.to_string())?;
    if !no_cache {
        fs::create_dir_all(&cli.cache_dir)
            .map_err(|err| format!("cannot create {}: {err}", cli.cache_dir.display()))?;
        let path = cache_path(cli, dim, radius);
        ball.save(&path)
            .map_err(|err| format!("cannot write {}: {err}", path.display()))?;
    }
    if let Some(path) = csv {
        let mut buffer = Vec::new();
        ball.write_csv(&mut buffer).map_err(|err| err.to_string())?;
        fs::write(path, buffer).map_err(|err| format!("cannot write {}: {err}", path.display()))?;
    }
    let cumulative: Vec<usize> = (0..=radius).map(|r| ball.count_at_most(r)).collect();
    match cli.format {
        Format::Plain => {
            println!("dim {dim}");
            println!("radius {radius}");
            println!("count {}", ball.len());
            let profile: Vec<String> = cumulative.iter().map(|n| n.to_string()).collect();
            println!("cumulative {}", profile.join(","));
        }
        Format::Csv => {
            let mut buffer = Vec::new();
            ball.write_csv(&mut buffer).map_err(|err| err.to_string())?;
            print!("{}", String::from_utf8(buffer).expect("CSV output is UTF-8"));
        }
        Format::Json => {
            let out = BallOut {
                dim,
                radius,
                count: ball.len(),
                cumulative,
            };
            println!("{}", serde_json::to_string(&out).unwrap());
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct RecordOut {
    dim: usize,
    n: u64,
    mode: String,
    u: String,
    v: String,
    witness: String,
    witness_len: String,
    input_size: u64,
    ratio: f64,
}

fn experiment_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from("dim,n,mode,u,v,witness,witness_len,input_size,ratio\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{:.6}",
            r.dim,
            r.n,
            r.mode,
            quote(&r.u.to_string()),
            quote(&r.v.to_string()),
            quote(&r.witness.to_string()),
            r.witness_length,
            r.input_size,
            r.ratio
        )
        .expect("writing to a string cannot fail");
    }
    out
}

fn cmd_clx(
    cli: &Cli,
    mode: ModeArg,
    n_values: &[u64],
    pairs_per_n: usize,
    out_path: Option<&Path>,
) -> Result<ExitCode, String> {
    let dim = cli.dim.unwrap_or(2);
    if pairs_per_n == 0 {
        return Err("--pairs-per-n must be at least 1".to_string());
    }
    let mode = match mode {
        ModeArg::WitnessFamily => ExperimentMode::WitnessFamily,
        ModeArg::RandomPairs => ExperimentMode::RandomPairs,
    };
    let opts = ExperimentOptions {
        seed: cli.seed,
        pairs_per_n,
    };
    let records = cl_experiment(dim, n_values, mode, &opts);
    let rendered = match cli.format {
        Format::Plain | Format::Csv => experiment_csv(&records),
        Format::Json => {
            let out: Vec<RecordOut> = records
                .iter()
                .map(|r| RecordOut {
                    dim: r.dim,
                    n: r.n,
                    mode: r.mode.to_string(),
                    u: r.u.to_string(),
                    v: r.v.to_string(),
                    witness: r.witness.to_string(),
                    witness_len: r.witness_length.to_string(),
                    input_size: r.input_size,
                    ratio: r.ratio,
                })
                .collect();
            let mut text = serde_json::to_string(&out).unwrap();
            text.push('\n');
            text
        }
    };
    match out_path {
        Some(path) => fs::write(path, rendered)
            .map_err(|err| format!("cannot write {}: {err}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(ExitCode::SUCCESS)
}
