//! Command-line frontend: validate and derive abc-triples, inspect curves,
//! and run the Tamagawa-product search end to end.

use clap::{Args, Parser, Subcommand};
use num_bigint::{BigInt, BigUint};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use tamagawa::arith::{self, StepBudget};
use tamagawa::curve::WeierstrassCurve;
use tamagawa::pipeline::{
    self, figure, formats, tables, CurveRecord, InputFormat, InputSpec, PipelineError,
    SearchConfig, SourceTag,
};
use tamagawa::reduction;

#[derive(Parser)]
#[command(name = "tamagawa", version, about = "Searches for elliptic curves over Q with large Tamagawa products by walking twisted Frey-Hellegouarch curves of good abc-triples and their isogeny neighbourhoods.")]
struct Cli {
    /// line-oriented key=value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// worker count (0 = all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// per-work-item step budget
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate or derive abc-triples
    Triples {
        #[command(subcommand)]
        cmd: TriplesCmd,
    },
    /// Inspect a single curve
    Curve {
        #[command(subcommand)]
        cmd: CurveCmd,
    },
    /// Run the full search over input files
    Search(SearchArgs),
    /// Regenerate the output tables from saved records
    Tables {
        /// records.tsv files produced by `search`
        records: Vec<PathBuf>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value = "all")]
        label: String,
        #[arg(long, default_value_t = 1.5)]
        threshold: f64,
    },
    /// Render the scatter figure from saved records
    Figure {
        records: Vec<PathBuf>,
        #[arg(long, default_value = "figure.svg")]
        out: PathBuf,
    },
    /// Print the per-source summary from saved records
    Summary {
        records: Vec<PathBuf>,
        #[arg(long, default_value_t = 1.5)]
        threshold: f64,
    },
}

#[derive(Subcommand)]
enum TriplesCmd {
    /// Parse a triple file and report quality, merit and category
    Check {
        file: PathBuf,
        #[arg(long, default_value = "canonical")]
        format: String,
    },
    /// Apply the four triples-from-triples constructions to every triple
    Derive {
        file: PathBuf,
        #[arg(long, default_value = "canonical")]
        format: String,
    },
}

#[derive(Subcommand)]
enum CurveCmd {
    /// b-, c-invariants, discriminant and j-invariant
    Invariants(CoeffArgs),
    /// Global minimal model and the coordinate change reaching it
    Minimal(CoeffArgs),
    /// Kodaira types, conductor and Tamagawa numbers at the bad primes
    Localdata(CoeffArgs),
}

#[derive(Args)]
struct CoeffArgs {
    /// a1 a2 a3 a4 a6
    #[arg(num_args = 5, allow_hyphen_values = true)]
    coefficients: Vec<String>,
}

#[derive(Args)]
struct SearchArgs {
    /// triple input file (canonical format unless --triple-format desmit)
    #[arg(long)]
    triples: Vec<PathBuf>,
    /// source tag for triple inputs
    #[arg(long, default_value = "high-quality")]
    source: String,
    #[arg(long, default_value = "canonical")]
    triple_format: String,
    /// Cremona allcurves input file
    #[arg(long)]
    cremona: Vec<PathBuf>,
    /// LMFDB-style CSV input file (conductor,a1..a6)
    #[arg(long)]
    lmfdb: Vec<PathBuf>,
    /// comma-separated squarefree twists
    #[arg(long, allow_hyphen_values = true)]
    twists: Option<String>,
    /// isogeny depth (1..=3)
    #[arg(long)]
    depth: Option<u32>,
    /// q_tau report threshold
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// skip triples with c above this bound
    #[arg(long)]
    max_c: Option<BigUint>,
    /// label used in output file names (defaults to the source tag)
    #[arg(long)]
    label: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                PipelineError::Config(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), PipelineError> {
    let file_cfg = match &cli.config {
        Some(path) => parse_config_file(path)?,
        None => BTreeMap::new(),
    };
    let jobs = cli
        .jobs
        .or_else(|| file_cfg.get("jobs").and_then(|v| v.parse().ok()))
        .unwrap_or(0);
    let budget = cli
        .budget
        .or_else(|| file_cfg.get("budget").and_then(|v| v.parse().ok()))
        .unwrap_or(10_000_000);

    match cli.cmd {
        Cmd::Triples { cmd } => match cmd {
            TriplesCmd::Check { file, format } => triples_check(&file, &format),
            TriplesCmd::Derive { file, format } => triples_derive(&file, &format),
        },
        Cmd::Curve { cmd } => match cmd {
            CurveCmd::Invariants(args) => curve_invariants(&args),
            CurveCmd::Minimal(args) => curve_minimal(&args),
            CurveCmd::Localdata(args) => curve_localdata(&args, budget),
        },
        Cmd::Search(args) => search(args, &file_cfg, jobs, budget),
        Cmd::Tables {
            records,
            out,
            label,
            threshold,
        } => {
            let recs = load_many(&records)?;
            let (qua, tam) = tables::emit_tables(&recs, threshold, &out, &label)?;
            eprintln!("wrote {} and {}", qua.display(), tam.display());
            Ok(())
        }
        Cmd::Figure { records, out } => {
            let recs = load_many(&records)?;
            figure::emit_figure(&recs, &out)?;
            eprintln!("wrote {}", out.display());
            Ok(())
        }
        Cmd::Summary { records, threshold } => {
            let recs = load_many(&records)?;
            let by_source = tables::split_by_source(&recs);
            let sets: Vec<(SourceTag, usize, Vec<CurveRecord>)> = by_source
                .into_iter()
                .map(|(tag, rs)| {
                    let inputs = distinct_inputs(&rs);
                    (tag, inputs, rs)
                })
                .collect();
            print!("{}", tables::summarize(&sets, threshold));
            Ok(())
        }
    }
}

/// When summarising from saved records the original input counts are gone;
/// count distinct originating triples (or curves for database sources).
fn distinct_inputs(records: &[CurveRecord]) -> usize {
    let mut seen = std::collections::BTreeSet::new();
    for r in records {
        match &r.triple {
            Some((a, b, c)) => seen.insert(format!("{a} {b} {c}")),
            None => seen.insert(r.model.to_string()),
        };
    }
    seen.len()
}

fn load_many(paths: &[PathBuf]) -> Result<Vec<CurveRecord>, PipelineError> {
    if paths.is_empty() {
        return Err(PipelineError::Config("no records files given".into()));
    }
    let mut out = Vec::new();
    for p in paths {
        out.extend(pipeline::read_records(p)?);
    }
    pipeline::dedup_and_sort(&mut out);
    Ok(out)
}

fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, PipelineError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| PipelineError::Io(path.display().to_string(), e))?;
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => {
                map.insert(k.trim().to_string(), v.trim().to_string());
            }
            None => {
                return Err(PipelineError::Config(format!(
                    "{}:{}: expected key=value",
                    path.display(),
                    idx + 1
                )))
            }
        }
    }
    Ok(map)
}

fn triple_format(name: &str) -> Result<(InputFormat, formats::TripleFormat), PipelineError> {
    match name {
        "canonical" => Ok((InputFormat::TripleCanonical, formats::TripleFormat::Canonical)),
        "desmit" => Ok((InputFormat::TripleDeSmit, formats::TripleFormat::DeSmitLike)),
        other => Err(PipelineError::Config(format!(
            "unknown triple format {other}"
        ))),
    }
}

fn triples_check(file: &Path, format: &str) -> Result<(), PipelineError> {
    let (_, fmt) = triple_format(format)?;
    let parsed = formats::parse_triple_file(file, fmt)?;
    for d in &parsed.diagnostics {
        eprintln!(
            "{}:{}: {} ({})",
            file.display(),
            d.line,
            d.reason,
            d.content.trim()
        );
    }
    println!("{:<50} {:>9} {:>9}  {}", "a b c", "q", "m", "category");
    for t in &parsed.triples {
        let cat = t.classify();
        let merit = t
            .merit()
            .map(|m| format!("{m:9.5}"))
            .unwrap_or_else(|_| "        -".into());
        println!(
            "{:<50} {:9.5} {}  {}{}",
            t.to_string(),
            t.quality(),
            merit,
            cat.band,
            if cat.high_merit { " high-merit" } else { "" }
        );
    }
    Ok(())
}

fn triples_derive(file: &Path, format: &str) -> Result<(), PipelineError> {
    let (_, fmt) = triple_format(format)?;
    let parsed = formats::parse_triple_file(file, fmt)?;
    for t in &parsed.triples {
        println!("{t}  q={:.5}", t.quality());
        for cand in t.derive_triples() {
            match &cand.outcome {
                Ok(derived) => {
                    let merit = derived
                        .merit()
                        .map(|m| format!(" m={m:.5}"))
                        .unwrap_or_default();
                    println!(
                        "  {}: {} {} {}  q={:.5}{}",
                        cand.label,
                        cand.a,
                        cand.b,
                        cand.c,
                        derived.quality(),
                        merit
                    );
                }
                Err(e) => println!(
                    "  {}: {} {} {}  invalid: {e}",
                    cand.label, cand.a, cand.b, cand.c
                ),
            }
        }
    }
    Ok(())
}

fn parse_curve(args: &CoeffArgs) -> Result<WeierstrassCurve, PipelineError> {
    let c: Vec<BigInt> = args
        .coefficients
        .iter()
        .map(|s| s.parse::<BigInt>())
        .collect::<Result<_, _>>()
        .map_err(|e| PipelineError::Config(format!("bad coefficient: {e}")))?;
    WeierstrassCurve::new(
        c[0].clone(),
        c[1].clone(),
        c[2].clone(),
        c[3].clone(),
        c[4].clone(),
    )
    .map_err(|e| PipelineError::Config(e.to_string()))
}

fn curve_invariants(args: &CoeffArgs) -> Result<(), PipelineError> {
    let e = parse_curve(args)?;
    let inv = e.invariants();
    println!("curve {e}");
    println!("b2 = {}", inv.b2);
    println!("b4 = {}", inv.b4);
    println!("b6 = {}", inv.b6);
    println!("b8 = {}", inv.b8);
    println!("c4 = {}", inv.c4);
    println!("c6 = {}", inv.c6);
    println!("disc = {}", inv.disc);
    println!("j = {}", inv.j());
    Ok(())
}

fn curve_minimal(args: &CoeffArgs) -> Result<(), PipelineError> {
    let e = parse_curve(args)?;
    let (m, tr) = e.minimal_model();
    println!("minimal {m}");
    println!("u = {}, r = {}, s = {}, t = {}", tr.u, tr.r, tr.s, tr.t);
    Ok(())
}

fn curve_localdata(args: &CoeffArgs, budget: u64) -> Result<(), PipelineError> {
    let e = parse_curve(args)?;
    let mut steps = StepBudget::limited(budget);
    let f = arith::factor(e.discriminant().magnitude(), &mut steps);
    if !f.is_complete() {
        return Err(PipelineError::Config(format!(
            "discriminant factoring exceeded the step budget (cofactor {})",
            f.cofactor().unwrap()
        )));
    }
    let g = reduction::global_data_budgeted(&e, &f, &mut steps)
        .map_err(|e| PipelineError::Config(e.to_string()))?;
    println!("minimal {}", g.minimal_model);
    for l in &g.locals {
        println!(
            "p = {:<10} {:<5} f = {} c = {:<6} {}",
            l.p,
            l.kodaira.to_string(),
            l.f,
            l.c,
            l.kind
        );
    }
    println!(
        "N = {} = {}",
        g.conductor,
        CurveRecord::render_factors(&g.conductor_factors)
    );
    println!(
        "tau = {} = {}",
        g.tamagawa,
        g.tamagawa_factorization().render()
    );
    println!("q_tau = {:.5}", g.q_tau);
    Ok(())
}

fn search(
    args: SearchArgs,
    file_cfg: &BTreeMap<String, String>,
    jobs: usize,
    budget: u64,
) -> Result<(), PipelineError> {
    let source: SourceTag = args.source.parse().map_err(PipelineError::Config)?;
    let (tri_fmt, _) = triple_format(
        file_cfg
            .get("triple_format")
            .map(String::as_str)
            .unwrap_or(&args.triple_format),
    )?;

    let mut inputs = Vec::new();
    for p in &args.triples {
        inputs.push(InputSpec {
            path: p.clone(),
            format: tri_fmt,
            source,
        });
    }
    for p in &args.cremona {
        inputs.push(InputSpec {
            path: p.clone(),
            format: InputFormat::CremonaAllcurves,
            source: SourceTag::Cremona,
        });
    }
    for p in &args.lmfdb {
        inputs.push(InputSpec {
            path: p.clone(),
            format: InputFormat::LmfdbCsv,
            source: SourceTag::Lmfdb,
        });
    }
    if inputs.is_empty() {
        return Err(PipelineError::Config("no input files given".into()));
    }

    let twists = match args
        .twists
        .as_deref()
        .or_else(|| file_cfg.get("twists").map(String::as_str))
    {
        Some(t) => t
            .split(',')
            .map(|d| d.trim().parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| PipelineError::Config(format!("bad twist list: {e}")))?,
        None => pipeline::default_twists(),
    };
    let cfg = SearchConfig {
        inputs,
        twists,
        isogeny_depth: args
            .depth
            .or_else(|| file_cfg.get("depth").and_then(|v| v.parse().ok()))
            .unwrap_or(1),
        budget,
        q_tau_threshold: args
            .threshold
            .or_else(|| file_cfg.get("threshold").and_then(|v| v.parse().ok()))
            .unwrap_or(1.5),
        out_dir: args.out.clone(),
        jobs,
        checkpoint: args
            .checkpoint
            .clone()
            .or_else(|| file_cfg.get("checkpoint").map(PathBuf::from)),
        max_c: args
            .max_c
            .clone()
            .or_else(|| file_cfg.get("max_c").and_then(|v| v.parse().ok())),
    };

    std::fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| PipelineError::Io(cfg.out_dir.display().to_string(), e))?;
    let outcome = pipeline::run_search(&cfg)?;
    for d in &outcome.diagnostics {
        eprintln!("diagnostic: {}: {}", d.item, d.message);
    }

    let label = args.label.unwrap_or_else(|| source.as_str().to_string());
    pipeline::write_records(&cfg.out_dir.join("records.tsv"), &outcome.records)?;
    tables::emit_tables(&outcome.records, cfg.q_tau_threshold, &cfg.out_dir, &label)?;
    figure::emit_figure(&outcome.records, &cfg.out_dir.join("figure.svg"))?;
    let by_source = tables::split_by_source(&outcome.records);
    let sets: Vec<(SourceTag, usize, Vec<CurveRecord>)> = by_source
        .into_iter()
        .map(|(tag, rs)| {
            let inputs = outcome.input_counts.get(&tag).copied().unwrap_or(0);
            (tag, inputs, rs)
        })
        .collect();
    let summary = tables::summarize(&sets, cfg.q_tau_threshold);
    std::fs::write(cfg.out_dir.join("summary.txt"), &summary)
        .map_err(|e| PipelineError::Io("summary.txt".into(), e))?;
    print!("{summary}");
    eprintln!(
        "{} records, {} diagnostics -> {}",
        outcome.records.len(),
        outcome.diagnostics.len(),
        cfg.out_dir.display()
    );
    Ok(())
}
