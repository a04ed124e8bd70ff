//! Input file formats: Cremona allcurves lines, triple files, LMFDB-style
//! CSV. All ingestion is file based; nothing here talks to a network.

use crate::abc::AbcTriple;
use crate::arith;
use num_bigint::{BigInt, BigUint};
use std::fmt;
use std::path::Path;
use thiserror::Error;

use crate::curve::WeierstrassCurve;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{file}:{line}:{col}: {msg}")]
    Syntax {
        file: String,
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
}

/// One verified line of a triple file that failed validation.
#[derive(Debug, Clone)]
pub struct TripleDiagnostic {
    pub line: usize,
    pub content: String,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleFormat {
    /// `a b c` with optional factored forms `p^e*p^e*...` for each of a, b, c
    Canonical,
    /// tolerant variant: first three integer tokens are a, b, c, everything
    /// else on the line is ignored
    DeSmitLike,
}

/// Parsed row of a Cremona allcurves file.
#[derive(Debug, Clone)]
pub struct CremonaRow {
    pub conductor: BigUint,
    pub class: String,
    pub class_index: u32,
    pub curve: WeierstrassCurve,
    pub rank: i64,
    pub torsion: u32,
}

/// N class index [a1,a2,a3,a4,a6] rank torsion
pub fn parse_cremona_line(
    file: &str,
    lineno: usize,
    line: &str,
) -> Result<Option<CremonaRow>, ParseError> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let err = |col: usize, msg: String| ParseError::Syntax {
        file: file.to_string(),
        line: lineno,
        col,
        msg,
    };
    let mut tokens = Vec::new();
    let mut offset = 0;
    for tok in trimmed.split_whitespace() {
        let col = line[offset..].find(tok).map(|i| offset + i).unwrap_or(0);
        tokens.push((col + 1, tok));
        offset = col + tok.len();
    }
    if tokens.len() != 6 {
        return Err(err(1, format!("expected 6 fields, found {}", tokens.len())));
    }
    let conductor = tokens[0]
        .1
        .parse::<BigUint>()
        .map_err(|_| err(tokens[0].0, "bad conductor".into()))?;
    let class = tokens[1].1.to_string();
    let class_index = tokens[2]
        .1
        .parse::<u32>()
        .map_err(|_| err(tokens[2].0, "bad class index".into()))?;
    let curve = parse_coeff_list(tokens[3].1)
        .ok_or_else(|| err(tokens[3].0, "bad coefficient list".into()))?;
    let rank = tokens[4]
        .1
        .parse::<i64>()
        .map_err(|_| err(tokens[4].0, "bad rank".into()))?;
    let torsion = tokens[5]
        .1
        .parse::<u32>()
        .map_err(|_| err(tokens[5].0, "bad torsion order".into()))?;
    Ok(Some(CremonaRow {
        conductor,
        class,
        class_index,
        curve,
        rank,
        torsion,
    }))
}

/// `[a1,a2,a3,a4,a6]`, exact decimal integers, no inner whitespace.
pub fn parse_coeff_list(s: &str) -> Option<WeierstrassCurve> {
    let inner = s.strip_prefix('[')?.strip_suffix(']')?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 5 {
        return None;
    }
    let mut c = Vec::with_capacity(5);
    for p in parts {
        c.push(p.trim().parse::<BigInt>().ok()?);
    }
    WeierstrassCurve::new(
        c[0].clone(),
        c[1].clone(),
        c[2].clone(),
        c[3].clone(),
        c[4].clone(),
    )
    .ok()
}

/// `p^e*p^e*...` or `1`.
pub fn parse_factored(s: &str) -> Option<Vec<(BigUint, u32)>> {
    if s == "1" {
        return Some(Vec::new());
    }
    let mut out = Vec::new();
    for part in s.split('*') {
        let (p, e) = match part.split_once('^') {
            Some((p, e)) => (p.parse::<BigUint>().ok()?, e.parse::<u32>().ok()?),
            None => (part.parse::<BigUint>().ok()?, 1),
        };
        out.push((p, e));
    }
    Some(out)
}

pub struct TripleFile {
    pub triples: Vec<AbcTriple>,
    pub diagnostics: Vec<TripleDiagnostic>,
}

/// Parse and validate a triple file. Lines failing validation become
/// diagnostics rather than errors; an unreadable file is fatal.
pub fn parse_triple_file(path: &Path, format: TripleFormat) -> Result<TripleFile, ParseError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ParseError::Io(path.display().to_string(), e))?;
    let mut triples = Vec::new();
    let mut diagnostics = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match parse_triple_line(line, format) {
            Ok(t) => triples.push(t),
            Err(reason) => diagnostics.push(TripleDiagnostic {
                line: lineno,
                content: raw.to_string(),
                reason,
            }),
        }
    }
    Ok(TripleFile {
        triples,
        diagnostics,
    })
}

fn parse_triple_line(line: &str, format: TripleFormat) -> Result<AbcTriple, String> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    let ints: Vec<BigUint> = match format {
        TripleFormat::Canonical => {
            if tokens.len() != 3 && tokens.len() != 6 {
                return Err(format!("expected 3 or 6 fields, found {}", tokens.len()));
            }
            tokens[..3]
                .iter()
                .map(|t| t.parse::<BigUint>())
                .collect::<Result<_, _>>()
                .map_err(|e| format!("bad integer: {e}"))?
        }
        TripleFormat::DeSmitLike => {
            let picked: Vec<BigUint> = tokens
                .iter()
                .filter_map(|t| t.parse::<BigUint>().ok())
                .take(3)
                .collect();
            if picked.len() != 3 {
                return Err("fewer than three integer fields".into());
            }
            picked
        }
    };
    let (a, b, c) = (ints[0].clone(), ints[1].clone(), ints[2].clone());
    if format == TripleFormat::Canonical && tokens.len() == 6 {
        let fa = parse_factored(tokens[3]).ok_or("bad factored form for a")?;
        let fb = parse_factored(tokens[4]).ok_or("bad factored form for b")?;
        let fc = parse_factored(tokens[5]).ok_or("bad factored form for c")?;
        AbcTriple::with_factorizations(a, b, c, &fa, &fb, &fc).map_err(|e| e.to_string())
    } else {
        AbcTriple::new(a, b, c).map_err(|e| e.to_string())
    }
}

/// LMFDB-style CSV row: conductor plus a-invariants. The stored conductor is
/// kept so it can be cross-checked against the recomputed one.
#[derive(Debug, Clone)]
pub struct LmfdbRow {
    pub stored_conductor: BigUint,
    pub curve: WeierstrassCurve,
}

/// `conductor,a1,a2,a3,a4,a6` with a header row.
pub fn parse_lmfdb_csv(path: &Path) -> Result<Vec<LmfdbRow>, ParseError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ParseError::Io(path.display().to_string(), e))?;
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || lineno == 1 {
            continue; // header
        }
        let fields: Vec<&str> = line.split(',').map(|f| f.trim()).collect();
        let err = |msg: &str| ParseError::Syntax {
            file: path.display().to_string(),
            line: lineno,
            col: 1,
            msg: msg.to_string(),
        };
        if fields.len() != 6 {
            return Err(err("expected 6 comma-separated fields"));
        }
        let stored_conductor = fields[0]
            .parse::<BigUint>()
            .map_err(|_| err("bad conductor"))?;
        let coeffs: Vec<BigInt> = fields[1..]
            .iter()
            .map(|f| f.parse::<BigInt>())
            .collect::<Result<_, _>>()
            .map_err(|_| err("bad coefficient"))?;
        let curve = WeierstrassCurve::new(
            coeffs[0].clone(),
            coeffs[1].clone(),
            coeffs[2].clone(),
            coeffs[3].clone(),
            coeffs[4].clone(),
        )
        .map_err(|_| err("singular curve"))?;
        out.push(LmfdbRow {
            stored_conductor,
            curve,
        });
    }
    Ok(out)
}

/// Read a whole allcurves file; parse errors are fatal with position info.
pub fn parse_cremona_file(path: &Path) -> Result<Vec<CremonaRow>, ParseError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ParseError::Io(path.display().to_string(), e))?;
    let name = path.display().to_string();
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if let Some(row) = parse_cremona_line(&name, idx + 1, line)? {
            out.push(row);
        }
    }
    Ok(out)
}

/// Verified factorization of a value that may accompany a triple.
pub fn verify_claimed(n: &BigUint, claimed: &[(BigUint, u32)]) -> bool {
    arith::Factorization::from_known_factors(n.clone(), claimed).is_ok()
}

impl fmt::Display for TripleFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TripleFormat::Canonical => write!(f, "canonical"),
            TripleFormat::DeSmitLike => write!(f, "desmit"),
        }
    }
}
