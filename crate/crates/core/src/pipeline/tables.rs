//! Tab-separated record tables and the per-source summary.

use super::{CurveRecord, PipelineError, SourceTag};
use num_bigint::BigUint;
use std::collections::BTreeMap;
use std::path::Path;

const HEADER: &str = "# rank\tq_tau\ttau\ttau_factors\tN\tN_factors\tmodel\tsource\ttriple\td\tq\tm";

fn row(rank: usize, r: &CurveRecord) -> String {
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
    let five = |v: Option<f64>| v.map(|x| format!("{x:.5}")).unwrap_or_else(|| "-".into());
    format!(
        "{rank}\t{:.5}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
        r.q_tau,
        r.tamagawa,
        CurveRecord::render_factors(&r.tamagawa_factors),
        r.conductor,
        CurveRecord::render_factors(&r.conductor_factors),
        r.model,
        r.source,
        triple,
        twist,
        five(r.triple_quality),
        five(r.triple_merit),
    )
}

/// Emit `output_<label>_qua.txt` (q_tau descending, filtered at the
/// threshold) and `output_<label>_tam.txt` (tau descending, unfiltered).
/// Returns the two paths.
pub fn emit_tables(
    records: &[CurveRecord],
    threshold: f64,
    out_dir: &Path,
    label: &str,
) -> Result<(std::path::PathBuf, std::path::PathBuf), PipelineError> {
    let io_err = |p: &Path, e: std::io::Error| PipelineError::Io(p.display().to_string(), e);

    let mut by_qua: Vec<&CurveRecord> = records.iter().filter(|r| r.q_tau > threshold).collect();
    by_qua.sort_by(|a, b| {
        b.q_tau
            .partial_cmp(&a.q_tau)
            .unwrap()
            .then_with(|| a.conductor.cmp(&b.conductor))
            .then_with(|| a.model.to_string().cmp(&b.model.to_string()))
    });
    let qua_path = out_dir.join(format!("output_{label}_qua.txt"));
    let mut buf = String::from(HEADER);
    buf.push('\n');
    for (i, r) in by_qua.iter().enumerate() {
        buf.push_str(&row(i + 1, r));
        buf.push('\n');
    }
    std::fs::write(&qua_path, &buf).map_err(|e| io_err(&qua_path, e))?;

    let mut by_tam: Vec<&CurveRecord> = records.iter().collect();
    by_tam.sort_by(|a, b| {
        b.tamagawa
            .cmp(&a.tamagawa)
            .then_with(|| a.conductor.cmp(&b.conductor))
            .then_with(|| a.model.to_string().cmp(&b.model.to_string()))
    });
    let tam_path = out_dir.join(format!("output_{label}_tam.txt"));
    let mut buf = String::from(HEADER);
    buf.push('\n');
    for (i, r) in by_tam.iter().enumerate() {
        buf.push_str(&row(i + 1, r));
        buf.push('\n');
    }
    std::fs::write(&tam_path, &buf).map_err(|e| io_err(&tam_path, e))?;
    Ok((qua_path, tam_path))
}

/// Summary table over per-source record sets: inputs, curves above the
/// threshold, largest q_tau, largest tau, plus an all-together row.
pub fn summarize(
    sets: &[(SourceTag, usize, Vec<CurveRecord>)],
    threshold: f64,
) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<16}{:>10}{:>16}{:>14}{:>20}\n",
        "source", "inputs", "q_tau>thresh", "largest q_tau", "largest tau"
    ));
    let mut all: Vec<&CurveRecord> = Vec::new();
    let mut all_inputs = 0usize;
    for (tag, inputs, records) in sets {
        all_inputs += inputs;
        all.extend(records.iter());
        out.push_str(&summary_row(tag.as_str(), *inputs, records.iter(), threshold));
    }
    out.push_str(&summary_row(
        "all together",
        all_inputs,
        all.into_iter(),
        threshold,
    ));
    out
}

fn summary_row<'a>(
    label: &str,
    inputs: usize,
    records: impl Iterator<Item = &'a CurveRecord> + Clone,
    threshold: f64,
) -> String {
    let above = records.clone().filter(|r| r.q_tau > threshold).count();
    let best_q = records
        .clone()
        .map(|r| r.q_tau)
        .fold(None::<f64>, |acc, q| Some(acc.map_or(q, |a| a.max(q))));
    let best_tau = records.map(|r| &r.tamagawa).max().cloned();
    let q_str = best_q.map(|q| format!("{q:.5}")).unwrap_or_else(|| "-".into());
    let tau_str = best_tau
        .map(|t: BigUint| t.to_string())
        .unwrap_or_else(|| "-".into());
    format!(
        "{:<16}{:>10}{:>16}{:>14}{:>20}\n",
        label, inputs, above, q_str, tau_str
    )
}

/// Group records by their source tag.
pub fn split_by_source(records: &[CurveRecord]) -> BTreeMap<SourceTag, Vec<CurveRecord>> {
    let mut map: BTreeMap<SourceTag, Vec<CurveRecord>> = BTreeMap::new();
    for r in records {
        map.entry(r.source).or_default().push(r.clone());
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::WeierstrassCurve;
    

    fn record(q_tau: f64, tau: u64, n: u64, a6: i64) -> CurveRecord {
        CurveRecord {
            source: SourceTag::Cremona,
            triple: None,
            twist: None,
            isogeny_path: "db".into(),
            model: WeierstrassCurve::from_i64([0, 0, 0, -1, a6]).unwrap(),
            conductor: BigUint::from(n),
            conductor_factors: vec![(BigUint::from(n), 1)],
            tamagawa: BigUint::from(tau),
            tamagawa_factors: vec![(BigUint::from(tau), 1)],
            q_tau,
            triple_quality: None,
            triple_merit: None,
        }
    }

    #[test]
    fn tables_sort_and_filter() {
        let dir = tempfile::tempdir().unwrap();
        let records = vec![
            record(2.1, 64, 100, 2),
            record(1.2, 128, 50, 3),
            record(1.7, 2, 75, 4),
        ];
        let (qua, tam) = emit_tables(&records, 1.5, dir.path(), "test").unwrap();
        let qua = std::fs::read_to_string(qua).unwrap();
        let lines: Vec<&str> = qua.lines().collect();
        assert_eq!(lines.len(), 3); // header + two rows above threshold
        assert!(lines[1].starts_with("1\t2.10000"));
        assert!(lines[2].starts_with("2\t1.70000"));
        let tam = std::fs::read_to_string(tam).unwrap();
        let lines: Vec<&str> = tam.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].contains("\t128\t"));
    }

    #[test]
    fn empty_records_give_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let (qua, tam) = emit_tables(&[], 1.5, dir.path(), "empty").unwrap();
        assert_eq!(std::fs::read_to_string(qua).unwrap().lines().count(), 1);
        assert_eq!(std::fs::read_to_string(tam).unwrap().lines().count(), 1);
    }

    #[test]
    fn summary_union_row() {
        let sets = vec![
            (SourceTag::Cremona, 10, vec![record(2.1, 64, 100, 2)]),
            (SourceTag::HighQuality, 5, vec![record(2.4, 16, 99, 3)]),
        ];
        let s = summarize(&sets, 1.5);
        let last = s.lines().last().unwrap();
        assert!(last.starts_with("all together"));
        assert!(last.contains("2.40000"));
        assert!(last.contains("64"));
        let empty = summarize(&[], 1.5);
        assert!(empty.lines().last().unwrap().contains('-'));
    }
}
