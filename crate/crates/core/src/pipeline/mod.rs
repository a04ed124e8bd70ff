//! Search orchestration: work items over triples x twists x isogenous
//! curves (or database rows), a bounded worker pool, step budgets, an
//! append-only checkpoint, and deterministic record output.

pub mod figure;
pub mod formats;
pub mod tables;

use crate::abc::AbcTriple;
use crate::arith::{self, Factorization, StepBudget};
use crate::curve::{valuation, WeierstrassCurve};
use crate::isogeny;
use crate::reduction::{self, tamagawa_quality};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Parse(#[from] formats::ParseError),
    #[error("cannot write {0}: {1}")]
    Io(String, std::io::Error),
    #[error("bad configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SourceTag {
    Cremona,
    Lmfdb,
    HighQuality,
    MediumQuality,
    HighMerit,
    Unbeaten,
    Derived,
}

impl SourceTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            SourceTag::Cremona => "cremona",
            SourceTag::Lmfdb => "lmfdb",
            SourceTag::HighQuality => "high-quality",
            SourceTag::MediumQuality => "medium-quality",
            SourceTag::HighMerit => "high-merit",
            SourceTag::Unbeaten => "unbeaten",
            SourceTag::Derived => "derived",
        }
    }
}

impl fmt::Display for SourceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SourceTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "cremona" => SourceTag::Cremona,
            "lmfdb" => SourceTag::Lmfdb,
            "high-quality" => SourceTag::HighQuality,
            "medium-quality" => SourceTag::MediumQuality,
            "high-merit" => SourceTag::HighMerit,
            "unbeaten" => SourceTag::Unbeaten,
            "derived" => SourceTag::Derived,
            other => return Err(format!("unknown source tag {other}")),
        })
    }
}

/// One search-result row.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRecord {
    pub source: SourceTag,
    pub triple: Option<(BigUint, BigUint, BigUint)>,
    pub twist: Option<BigInt>,
    pub isogeny_path: String,
    pub model: WeierstrassCurve,
    pub conductor: BigUint,
    pub conductor_factors: Vec<(BigUint, u32)>,
    pub tamagawa: BigUint,
    pub tamagawa_factors: Vec<(BigUint, u32)>,
    pub q_tau: f64,
    pub triple_quality: Option<f64>,
    pub triple_merit: Option<f64>,
}

impl CurveRecord {
    pub fn render_factors(fs: &[(BigUint, u32)]) -> String {
        if fs.is_empty() {
            return "1".into();
        }
        fs.iter()
            .map(|(p, e)| {
                if *e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Non-fatal per-item failures reported alongside the results.
#[derive(Debug, Clone)]
pub struct Diagnostic {
    pub item: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    TripleCanonical,
    TripleDeSmit,
    CremonaAllcurves,
    LmfdbCsv,
}

#[derive(Debug, Clone)]
pub struct InputSpec {
    pub path: PathBuf,
    pub format: InputFormat,
    pub source: SourceTag,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub inputs: Vec<InputSpec>,
    /// squarefree nonzero twists applied to every triple
    pub twists: Vec<BigInt>,
    pub isogeny_depth: u32,
    /// per-work-item step budget (factoring + Tate iterations + isogeny nodes)
    pub budget: u64,
    /// report threshold on q_tau for the _qua tables
    pub q_tau_threshold: f64,
    pub out_dir: PathBuf,
    pub jobs: usize,
    pub checkpoint: Option<PathBuf>,
    /// optional cutoff: skip triples with c larger than this
    pub max_c: Option<BigUint>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            inputs: Vec::new(),
            twists: default_twists(),
            isogeny_depth: 1,
            budget: 10_000_000,
            q_tau_threshold: 1.5,
            out_dir: PathBuf::from("."),
            jobs: 0,
            checkpoint: None,
            max_c: None,
        }
    }
}

pub fn default_twists() -> Vec<BigInt> {
    [1, -1, 2, -2, 3, -3, 5, -5, 6, -6]
        .iter()
        .map(|d| BigInt::from(*d))
        .collect()
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.twists.is_empty() {
            return Err(PipelineError::Config("empty twist set".into()));
        }
        for d in &self.twists {
            if d.is_zero() {
                return Err(PipelineError::Config("twist 0 is not allowed".into()));
            }
            let f = arith::factor_unbounded(d.magnitude());
            if f.factors().iter().any(|(_, e)| *e > 1) {
                return Err(PipelineError::Config(format!("twist {d} is not squarefree")));
            }
        }
        if !(self.isogeny_depth >= 1 && self.isogeny_depth <= 3) {
            return Err(PipelineError::Config(
                "isogeny depth must be between 1 and 3".into(),
            ));
        }
        if self.q_tau_threshold <= 0.0 {
            return Err(PipelineError::Config("threshold must be positive".into()));
        }
        Ok(())
    }
}

pub struct SearchOutcome {
    pub records: Vec<CurveRecord>,
    pub diagnostics: Vec<Diagnostic>,
    /// number of triples (or curves) ingested per source
    pub input_counts: BTreeMap<SourceTag, usize>,
}

enum WorkItem {
    Triple {
        source: SourceTag,
        triple: AbcTriple,
        twist: BigInt,
    },
    DbCurve {
        source: SourceTag,
        curve: WeierstrassCurve,
        stored_conductor: Option<BigUint>,
    },
}

impl WorkItem {
    /// Stable id for checkpointing: hash of what identifies the work.
    fn id(&self, depth: u32) -> String {
        let mut h = Sha256::new();
        match self {
            WorkItem::Triple {
                triple, twist, ..
            } => {
                h.update(format!("triple|{triple}|{twist}|{depth}"));
            }
            WorkItem::DbCurve { curve, .. } => {
                h.update(format!("curve|{curve}"));
            }
        }
        hex_prefix(&h.finalize(), 16)
    }
}

fn hex_prefix(bytes: &[u8], n: usize) -> String {
    bytes[..n].iter().map(|b| format!("{b:02x}")).collect()
}

/// Run the full search described by `cfg`.
///
/// Every triple x twist pair is one work item: it builds the twisted
/// Frey-Hellegouarch curve, walks its isogeny neighbourhood, and computes
/// reduction data for every reachable curve. Items that exhaust their step
/// budget are reported as diagnostics and the run continues, mirroring a
/// per-curve abort. Results are deduplicated by minimal model and returned
/// in a deterministic order regardless of worker count.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchOutcome, PipelineError> {
    cfg.validate()?;
    let mut diagnostics = Vec::new();
    let mut items = Vec::new();
    let mut input_counts: BTreeMap<SourceTag, usize> = BTreeMap::new();

    for input in &cfg.inputs {
        match input.format {
            InputFormat::TripleCanonical | InputFormat::TripleDeSmit => {
                let fmt = if input.format == InputFormat::TripleCanonical {
                    formats::TripleFormat::Canonical
                } else {
                    formats::TripleFormat::DeSmitLike
                };
                let parsed = formats::parse_triple_file(&input.path, fmt)?;
                for d in parsed.diagnostics {
                    diagnostics.push(Diagnostic {
                        item: format!("{}:{}", input.path.display(), d.line),
                        message: d.reason,
                    });
                }
                let mut kept = 0;
                for t in parsed.triples {
                    if let Some(max_c) = &cfg.max_c {
                        if t.c() > max_c {
                            continue;
                        }
                    }
                    kept += 1;
                    for d in &cfg.twists {
                        items.push(WorkItem::Triple {
                            source: input.source,
                            triple: t.clone(),
                            twist: d.clone(),
                        });
                    }
                }
                *input_counts.entry(input.source).or_insert(0) += kept;
            }
            InputFormat::CremonaAllcurves => {
                let rows = formats::parse_cremona_file(&input.path)?;
                *input_counts.entry(input.source).or_insert(0) += rows.len();
                for r in rows {
                    items.push(WorkItem::DbCurve {
                        source: input.source,
                        curve: r.curve,
                        stored_conductor: Some(r.conductor),
                    });
                }
            }
            InputFormat::LmfdbCsv => {
                let rows = formats::parse_lmfdb_csv(&input.path)?;
                *input_counts.entry(input.source).or_insert(0) += rows.len();
                for r in rows {
                    items.push(WorkItem::DbCurve {
                        source: input.source,
                        curve: r.curve,
                        stored_conductor: Some(r.stored_conductor),
                    });
                }
            }
        }
    }

    // checkpoint: load already-done items
    let mut done: BTreeMap<String, Vec<CurveRecord>> = BTreeMap::new();
    if let Some(path) = &cfg.checkpoint {
        if path.exists() {
            done = checkpoint::load(path)
                .map_err(|e| PipelineError::Io(path.display().to_string(), e))?;
        }
    }
    let ckpt_file = match &cfg.checkpoint {
        Some(path) => Some(Mutex::new(
            std::fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| PipelineError::Io(path.display().to_string(), e))?,
        )),
        None => None,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| PipelineError::Config(e.to_string()))?;

    let results: Vec<(String, Result<Vec<CurveRecord>, Diagnostic>)> = pool.install(|| {
        items
            .par_iter()
            .map(|item| {
                let id = item.id(cfg.isogeny_depth);
                if let Some(recs) = done.get(&id) {
                    return (id, Ok(recs.clone()));
                }
                let out = process_item(item, cfg);
                if let (Some(f), Ok(recs)) = (&ckpt_file, &out) {
                    let mut guard = f.lock().unwrap();
                    let _ = checkpoint::append(&mut guard, &id, recs);
                }
                (id, out)
            })
            .collect()
    });

    let mut records = Vec::new();
    for (_, res) in results {
        match res {
            Ok(recs) => records.extend(recs),
            Err(d) => diagnostics.push(d),
        }
    }
    dedup_and_sort(&mut records);
    Ok(SearchOutcome {
        records,
        diagnostics,
        input_counts,
    })
}

/// Deterministic final ordering: q_tau descending, then conductor ascending,
/// then the coefficient rendering; duplicates by minimal model collapse.
pub fn dedup_and_sort(records: &mut Vec<CurveRecord>) {
    records.sort_by(|a, b| {
        b.q_tau
            .partial_cmp(&a.q_tau)
            .unwrap()
            .then_with(|| a.conductor.cmp(&b.conductor))
            .then_with(|| a.model.to_string().cmp(&b.model.to_string()))
            .then_with(|| a.source.cmp(&b.source))
            .then_with(|| format!("{:?}", a.triple).cmp(&format!("{:?}", b.triple)))
            .then_with(|| format!("{:?}", a.twist).cmp(&format!("{:?}", b.twist)))
            .then_with(|| a.isogeny_path.cmp(&b.isogeny_path))
    });
    let mut seen = BTreeSet::new();
    records.retain(|r| seen.insert(r.model.clone()));
}

fn process_item(item: &WorkItem, cfg: &SearchConfig) -> Result<Vec<CurveRecord>, Diagnostic> {
    let mut budget = StepBudget::limited(cfg.budget);
    match item {
        WorkItem::Triple {
            source,
            triple,
            twist,
        } => process_triple_item(*source, triple, twist, cfg, &mut budget),
        WorkItem::DbCurve {
            source,
            curve,
            stored_conductor,
        } => process_db_item(*source, curve, stored_conductor.as_ref(), &mut budget),
    }
}

fn process_triple_item(
    source: SourceTag,
    triple: &AbcTriple,
    twist: &BigInt,
    cfg: &SearchConfig,
    budget: &mut StepBudget,
) -> Result<Vec<CurveRecord>, Diagnostic> {
    let item_name = format!("{source} {triple} d={twist}");
    let diag = |message: String| Diagnostic {
        item: item_name.clone(),
        message,
    };
    let frey = WeierstrassCurve::frey(triple, twist).map_err(|e| diag(e.to_string()))?;

    // bad primes are known without factoring: 2, the primes of d, a, b, c
    let mut primes: BTreeSet<BigUint> = BTreeSet::new();
    primes.insert(BigUint::from(2u32));
    primes.extend(arith::factor_unbounded(twist.magnitude()).distinct_primes().cloned());
    for f in [triple.factor_a(), triple.factor_b(), triple.factor_c()] {
        primes.extend(f.distinct_primes().cloned());
    }
    let primes: Vec<BigUint> = primes.into_iter().collect();

    let curves = isogeny::enumerate_isogenous_budgeted(&frey, cfg.isogeny_depth, &primes, budget)
        .map_err(|e| diag(format!("budget exceeded: {e}")))?;

    let quality = triple.quality();
    let merit = triple.merit().ok();
    let mut out = Vec::new();
    for (idx, curve) in curves.iter().enumerate() {
        let disc_factors = factor_over_primes(&curve.discriminant(), &primes)
            .ok_or_else(|| diag(format!("discriminant of {curve} leaves the known prime set")))?;
        let g = reduction::global_data_budgeted(curve, &disc_factors, budget)
            .map_err(|e| diag(format!("budget exceeded: {e}")))?;
        out.push(CurveRecord {
            source,
            triple: Some((triple.a().clone(), triple.b().clone(), triple.c().clone())),
            twist: Some(twist.clone()),
            isogeny_path: format!("iso{idx}"),
            model: g.minimal_model.clone(),
            conductor: g.conductor.clone(),
            conductor_factors: g.conductor_factors.clone(),
            tamagawa: g.tamagawa.clone(),
            tamagawa_factors: g.tamagawa_factorization().factors().to_vec(),
            q_tau: g.q_tau,
            triple_quality: Some(quality),
            triple_merit: merit,
        });
    }
    Ok(out)
}

fn process_db_item(
    source: SourceTag,
    curve: &WeierstrassCurve,
    stored_conductor: Option<&BigUint>,
    budget: &mut StepBudget,
) -> Result<Vec<CurveRecord>, Diagnostic> {
    let item_name = format!("{source} {curve}");
    let diag = |message: String| Diagnostic {
        item: item_name.clone(),
        message,
    };
    let disc = curve.discriminant();
    let f = arith::factor(disc.magnitude(), budget);
    if !f.is_complete() {
        return Err(diag(format!(
            "budget exceeded factoring the discriminant (cofactor {} left)",
            f.cofactor().unwrap()
        )));
    }
    let g = reduction::global_data_budgeted(curve, &f, budget)
        .map_err(|e| diag(format!("budget exceeded: {e}")))?;
    if let Some(stored) = stored_conductor {
        if stored != &g.conductor {
            return Err(diag(format!(
                "stored conductor {} disagrees with recomputed {}",
                stored, g.conductor
            )));
        }
    }
    Ok(vec![CurveRecord {
        source,
        triple: None,
        twist: None,
        isogeny_path: "db".into(),
        model: g.minimal_model.clone(),
        conductor: g.conductor.clone(),
        conductor_factors: g.conductor_factors.clone(),
        tamagawa: g.tamagawa.clone(),
        tamagawa_factors: g.tamagawa_factorization().factors().to_vec(),
        q_tau: g.q_tau,
        triple_quality: None,
        triple_merit: None,
    }])
}

/// Factor `n` assuming all its primes lie in `primes`; None when a cofactor
/// remains, which signals a caller bug rather than a budget problem.
fn factor_over_primes(n: &BigInt, primes: &[BigUint]) -> Option<Factorization> {
    let mag = n.magnitude().clone();
    let mut pairs = Vec::new();
    let mut rest = BigInt::from(mag.clone());
    for p in primes {
        let pz = BigInt::from(p.clone());
        if (&rest % &pz).is_zero() {
            let v = valuation(&rest, &pz);
            pairs.push((p.clone(), v));
            rest /= pz.pow(v);
        }
    }
    if rest != BigInt::from(1) {
        return None;
    }
    Factorization::from_known_factors(mag, &pairs).ok()
}

pub mod checkpoint {
    //! Append-only checkpoint: `rec <id> <serialized record>` lines followed
    //! by a `done <id>` marker per finished work item. A crash mid-item
    //! leaves rec lines without the marker; they are ignored on load, so the
    //! item is simply recomputed.

    use super::*;
    use std::io::BufRead;

    pub fn append(
        f: &mut std::fs::File,
        id: &str,
        records: &[CurveRecord],
    ) -> std::io::Result<()> {
        let mut buf = String::new();
        for r in records {
            buf.push_str(&format!("rec {id} {}\n", serialize_record(r)));
        }
        buf.push_str(&format!("done {id}\n"));
        f.write_all(buf.as_bytes())?;
        f.flush()
    }

    pub fn load(path: &Path) -> std::io::Result<BTreeMap<String, Vec<CurveRecord>>> {
        let file = std::fs::File::open(path)?;
        let mut pending: BTreeMap<String, Vec<CurveRecord>> = BTreeMap::new();
        let mut done = BTreeMap::new();
        for line in std::io::BufReader::new(file).lines() {
            let line = line?;
            if let Some(rest) = line.strip_prefix("rec ") {
                if let Some((id, payload)) = rest.split_once(' ') {
                    if let Some(rec) = deserialize_record(payload) {
                        pending.entry(id.to_string()).or_default().push(rec);
                    }
                }
            } else if let Some(id) = line.strip_prefix("done ") {
                let id = id.trim();
                done.insert(id.to_string(), pending.remove(id).unwrap_or_default());
            }
        }
        Ok(done)
    }

    pub fn serialize_record(r: &CurveRecord) -> String {
        let triple = r
            .triple
            .as_ref()
            .map(|(a, b, c)| format!("{a} {b} {c}"))
            .unwrap_or_else(|| "-".into());
        let twist = r
            .twist
            .as_ref()
            .map(|d| d.to_string())
            .unwrap_or_else(|| "-".into());
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
        [
            r.source.as_str().to_string(),
            triple,
            twist,
            r.isogeny_path.clone(),
            r.model.to_string(),
            r.conductor.to_string(),
            CurveRecord::render_factors(&r.conductor_factors),
            r.tamagawa.to_string(),
            CurveRecord::render_factors(&r.tamagawa_factors),
            opt(r.triple_quality),
            opt(r.triple_merit),
        ]
        .join("\t")
    }

    pub fn deserialize_record(s: &str) -> Option<CurveRecord> {
        let f: Vec<&str> = s.split('\t').collect();
        if f.len() != 11 {
            return None;
        }
        let source = f[0].parse().ok()?;
        let triple = if f[1] == "-" {
            None
        } else {
            let parts: Vec<&str> = f[1].split_whitespace().collect();
            if parts.len() != 3 {
                return None;
            }
            Some((
                parts[0].parse().ok()?,
                parts[1].parse().ok()?,
                parts[2].parse().ok()?,
            ))
        };
        let twist = if f[2] == "-" {
            None
        } else {
            Some(f[2].parse().ok()?)
        };
        let model = formats::parse_coeff_list(f[4])?;
        let conductor: BigUint = f[5].parse().ok()?;
        let conductor_factors = formats::parse_factored(f[6])?;
        let tamagawa: BigUint = f[7].parse().ok()?;
        let tamagawa_factors = formats::parse_factored(f[8])?;
        // q_tau is a pure function of (tau, N): recompute instead of storing
        let q_tau = tamagawa_quality(&tamagawa, &conductor).ok()?;
        let optf = |s: &str| {
            if s == "-" {
                None
            } else {
                s.parse::<f64>().ok()
            }
        };
        Some(CurveRecord {
            source,
            triple,
            twist,
            isogeny_path: f[3].to_string(),
            model,
            conductor,
            conductor_factors,
            tamagawa,
            tamagawa_factors,
            q_tau,
            triple_quality: optf(f[9]),
            triple_merit: optf(f[10]),
        })
    }
}

/// Write the full record dump used by the `tables`, `figure` and `summary`
/// subcommands.
pub fn write_records(path: &Path, records: &[CurveRecord]) -> Result<(), PipelineError> {
    let mut buf = String::new();
    for r in records {
        buf.push_str(&checkpoint::serialize_record(r));
        buf.push('\n');
    }
    std::fs::write(path, buf).map_err(|e| PipelineError::Io(path.display().to_string(), e))
}

pub fn read_records(path: &Path) -> Result<Vec<CurveRecord>, PipelineError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| PipelineError::Io(path.display().to_string(), e))?;
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match checkpoint::deserialize_record(line) {
            Some(r) => out.push(r),
            None => {
                return Err(PipelineError::Config(format!(
                    "{}:{}: bad record line",
                    path.display(),
                    idx + 1
                )))
            }
        }
    }
    Ok(out)
}
