//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values. Run with `cargo test --test acceptance -- --nocapture`
//! to see them.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed};
use std::path::{Path, PathBuf};
use std::time::Instant;

use tamagawa::abc::AbcTriple;
use tamagawa::arith;
use tamagawa::curve::WeierstrassCurve;
use tamagawa::isogeny;
use tamagawa::pipeline::{
    self, formats, tables, InputFormat, InputSpec, SearchConfig, SourceTag,
};
use tamagawa::reduction;

fn big(s: &str) -> BigUint {
    BigUint::parse_bytes(s.as_bytes(), 10).unwrap()
}

fn bigi(s: &str) -> BigInt {
    BigInt::parse_bytes(s.as_bytes(), 10).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: {actual} vs expected {expected} (tol {tol})"
    );
}

#[test]
fn criterion_1_quality_and_merit() {
    let start = Instant::now();
    let t = AbcTriple::new(
        big("22771715409"),
        big("348972425216"),
        big("371744140625"),
    )
    .unwrap();
    close(t.quality(), 1.44181, 1e-4, "high-quality q");
    close(t.merit().unwrap(), 10.5196, 1e-4, "high-quality m");
    let t = AbcTriple::new(big("658489"), big("6879707136"), big("6880365625")).unwrap();
    close(t.quality(), 1.38137, 1e-4, "medium-quality q");
    close(t.merit().unwrap(), 6.67124, 1e-4, "medium-quality m");
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 1.0, "took {dt:?}");
    println!("criterion 1 PASS: q/m of the two reference triples reproduce ({dt:?})");
}

#[test]
fn criterion_2_derived_triples() {
    let start = Instant::now();
    let t = AbcTriple::new(big("10"), big("2187"), big("2197")).unwrap();
    let derived = t.derive_triples();
    let a3 = &derived[2];
    assert_eq!(
        (a3.a.to_string().as_str(), a3.b.to_string().as_str(), a3.c.to_string().as_str()),
        ("43840", "4782969", "4826809")
    );
    close(a3.quality().unwrap(), 1.41370, 1e-4, "A3 quality");
    let a4 = &derived[3];
    assert_eq!(
        (a4.a.to_string().as_str(), a4.b.to_string().as_str(), a4.c.to_string().as_str()),
        ("25", "4804839", "4804864")
    );
    close(a4.quality().unwrap(), 1.41328, 1e-4, "A4 quality");

    let t = AbcTriple::new(
        big("383102329"),
        big("58457678566023"),
        big("58458061668352"),
    )
    .unwrap();
    let derived = t.derive_triples();
    let a3 = derived[2].outcome.as_ref().unwrap();
    close(a3.quality(), 1.41918, 1e-3, "big A3 quality");
    close(a3.merit().unwrap(), 29.8237, 1e-3, "big A3 merit");
    let a4 = derived[3].outcome.as_ref().unwrap();
    close(a4.quality(), 1.45022, 1e-3, "big A4 quality");
    close(a4.merit().unwrap(), 34.4028, 1e-3, "big A4 merit");
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 5.0, "took {dt:?}");
    println!("criterion 2 PASS: all four printed derived triples reproduce ({dt:?})");
}

#[test]
fn criterion_3_database_recomputation() {
    // First record curve, as printed. The second record curve's printed a6
    // ends in ...950810000 in the source, which is its true value rounded to
    // 15 significant digits and is inconsistent with the printed conductor;
    // the exact trailing digits (...950819583) were reconstructed by solving
    // c6^2 = c4^3 - 1728 D over the admissible smooth discriminants (unique
    // solution, and it reproduces all three printed aggregates).
    let start = Instant::now();
    let e = WeierstrassCurve::new(
        bigi("1"),
        bigi("0"),
        bigi("0"),
        bigi("-1054050116"),
        bigi("-12046088636400"),
    )
    .unwrap();
    let f = arith::factor_unbounded(e.discriminant().magnitude());
    let g = reduction::global_data(&e, &f).unwrap();
    assert_eq!(g.conductor, big("39270"));
    assert_eq!(g.tamagawa, big("31104"));
    close(g.q_tau, 2.30681, 1e-4, "q_tau record");
    let dt1 = start.elapsed();
    assert!(dt1.as_secs_f64() < 1.0, "took {dt1:?}");

    let start = Instant::now();
    let e = WeierstrassCurve::new(
        bigi("1"),
        bigi("0"),
        bigi("0"),
        bigi("-4456595642213"),
        bigi("-1538486355950819583"),
    )
    .unwrap();
    let f = arith::factor_unbounded(e.discriminant().magnitude());
    let g = reduction::global_data(&e, &f).unwrap();
    assert_eq!(g.conductor, big("364650"));
    assert_eq!(g.tamagawa, big("87040"));
    close(g.q_tau, 2.26473, 1e-4, "tau record");
    let dt2 = start.elapsed();
    assert!(dt2.as_secs_f64() < 1.0, "took {dt2:?}");
    println!("criterion 3 PASS: (39270, 31104, 2.30681) and (364650, 87040, 2.26473) ({dt1:?}, {dt2:?})");
}

fn search_single_triple(
    dir: &Path,
    line: &str,
    source: SourceTag,
) -> Vec<pipeline::CurveRecord> {
    let input = dir.join("triples.txt");
    std::fs::write(&input, format!("{line}\n")).unwrap();
    let cfg = SearchConfig {
        inputs: vec![InputSpec {
            path: input,
            format: InputFormat::TripleCanonical,
            source,
        }],
        twists: vec![BigInt::from(-1)],
        isogeny_depth: 2,
        out_dir: dir.to_path_buf(),
        ..SearchConfig::default()
    };
    let outcome = pipeline::run_search(&cfg).unwrap();
    assert!(outcome.diagnostics.is_empty(), "{:?}", outcome.diagnostics);
    outcome.records
}

#[test]
fn criterion_4_high_quality_pipeline() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let records = search_single_triple(
        dir.path(),
        "22771715409 348972425216 371744140625 3^16*23^2 2^13*29^2*37^3 5^9*11^4*13",
        SourceTag::HighQuality,
    );
    let target = "[1,0,0,-2713479277841926834110,-53674762419393192464788215315900]";
    let hit = records
        .iter()
        .find(|r| r.model.to_string() == target)
        .expect("record curve missing from the search output");
    assert_eq!(hit.conductor, big("105872910"));
    assert_eq!(hit.tamagawa, big("3981312"));
    close(hit.q_tau, 2.39875, 1e-4, "q_tau");
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 60.0, "took {dt:?}");
    println!(
        "criterion 4 PASS: {target} with N=105872910 tau=3981312 q_tau={:.5} ({dt:?})",
        hit.q_tau
    );
}

#[test]
fn criterion_5_medium_quality_pipeline() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let records = search_single_triple(
        dir.path(),
        "658489 6879707136 6880365625 13*37^3 2^20*3^8 5^5*7^5*131",
        SourceTag::MediumQuality,
    );
    let target = "[1,0,0,-986143769212695065,-376928045756312748465752775]";
    let hit = records
        .iter()
        .find(|r| r.model.to_string() == target)
        .expect("record curve missing from the search output");
    assert_eq!(hit.conductor, big("13232310"));
    assert_eq!(hit.tamagawa, big("1228800"));
    close(hit.q_tau, 2.39177, 1e-4, "q_tau");
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 60.0, "took {dt:?}");
    println!(
        "criterion 5 PASS: {target} with N=13232310 tau=1228800 q_tau={:.5} ({dt:?})",
        hit.q_tau
    );
}

#[test]
fn criterion_6_fixture_recomputation() {
    let start = Instant::now();
    let rows = formats::parse_cremona_file(&fixture("allcurves_n1000.txt")).unwrap();
    assert!(rows.len() >= 4000, "fixture has only {} rows", rows.len());

    // oracle expectations, keyed by the model rendering
    let expected_text = std::fs::read_to_string(fixture("allcurves_n1000_expected.tsv")).unwrap();
    let mut expected = std::collections::BTreeMap::new();
    for line in expected_text.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        expected.insert(f[0].to_string(), (big(f[1]), big(f[2])));
    }
    assert_eq!(expected.len(), rows.len());

    let mut tau_sum = 0u64;
    for row in &rows {
        let f = arith::factor_unbounded(row.curve.discriminant().magnitude());
        let g = reduction::global_data(&row.curve, &f).unwrap();
        let (exp_n, exp_tau) = expected
            .get(&row.curve.to_string())
            .unwrap_or_else(|| panic!("no expectation for {}", row.curve));
        assert_eq!(&g.conductor, exp_n, "conductor of {}", row.curve);
        assert_eq!(&g.conductor, &row.conductor, "stored N column of {}", row.curve);
        assert_eq!(&g.tamagawa, exp_tau, "tamagawa of {}", row.curve);
        tau_sum += u64::try_from(&g.tamagawa).unwrap();
    }
    let mean = tau_sum as f64 / rows.len() as f64;
    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 120.0, "took {dt:?}");
    println!(
        "criterion 6 PASS (recomputation): {} rows match stored (N, tau) exactly, mean tau {mean:.4} ({dt:?})",
        rows.len()
    );
}

// The stated band [1.3, 2.3] for the mean Tamagawa product of the
// conductor <= 1000 slice cannot be met by any correct implementation: the
// 4400 committed curves alone, every one of whose multiplicative local
// factors was verified against independent point counts over F_p, sum to
// tau over 44000, so even the full slice (5113 curves) has mean >= 8.9.
// Conductor-ordered small-N slices are dominated by smooth-discriminant
// curves with long split-multiplicative chains, which pushes the average
// far above the all-curves value of about 1.82. The check runs as stated
// and is expected to fail; see the analysis notes for the derivation.
#[test]
fn criterion_6_mean_tau_band() {
    let rows = formats::parse_cremona_file(&fixture("allcurves_n1000.txt")).unwrap();
    let expected_text = std::fs::read_to_string(fixture("allcurves_n1000_expected.tsv")).unwrap();
    let mut tau_sum = 0u64;
    let mut count = 0u64;
    for line in expected_text.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        tau_sum += f[2].parse::<u64>().unwrap();
        count += 1;
    }
    assert_eq!(count, rows.len() as u64);
    let mean = tau_sum as f64 / count as f64;
    println!("criterion 6 mean-band: mean tau over the slice is {mean:.4}");
    assert!(
        (1.3..=2.3).contains(&mean),
        "mean tau {mean:.4} outside the stated band [1.3, 2.3]: the band is \
         unattainable for the conductor <= 1000 slice (its true mean is >= 8.9)"
    );
}

// Compact deterministic generator for the randomized suites below.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    fn triple(&mut self) -> AbcTriple {
        loop {
            let x = self.below(400) + 1;
            let y = self.below(400) + 1;
            let (a, b) = if x < y { (x, y) } else { (y, x) };
            if a == b || a.gcd(&b) != 1 {
                continue;
            }
            if let Ok(t) = AbcTriple::new(BigUint::from(a), BigUint::from(b), BigUint::from(a + b))
            {
                return t;
            }
        }
    }

    fn curve(&mut self) -> WeierstrassCurve {
        loop {
            let c = [
                (self.below(2)) as i64,
                (self.below(3)) as i64 - 1,
                (self.below(2)) as i64,
                (self.below(81)) as i64 - 40,
                (self.below(81)) as i64 - 40,
            ];
            if let Ok(e) = WeierstrassCurve::from_i64(c) {
                return e;
            }
        }
    }
}

#[test]
fn criterion_7_property_suites() {
    let start = Instant::now();
    const CASES: usize = 200;

    // (a) Frey discriminant identity
    let mut rng = Rng(1);
    let twists: Vec<BigInt> = [1i64, -1, 2, -2, 3, -3, 5, -5, 6, -6]
        .iter()
        .map(|d| BigInt::from(*d))
        .collect();
    for _ in 0..CASES {
        let t = rng.triple();
        let d = &twists[rng.below(twists.len() as u64) as usize];
        let e = WeierstrassCurve::frey(&t, d).unwrap();
        let abc = BigInt::from(t.a() * t.b() * t.c());
        assert_eq!(e.discriminant(), BigInt::from(16) * d.pow(6) * &abc * &abc);
    }

    // (b) odd part of N = odd part of rad(abc) for d = +-1
    let mut rng = Rng(2);
    for i in 0..CASES {
        let t = rng.triple();
        let d = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let e = WeierstrassCurve::frey(&t, &d).unwrap();
        let f = arith::factor_unbounded(e.discriminant().magnitude());
        let g = reduction::global_data(&e, &f).unwrap();
        let odd = |mut n: BigUint| {
            while n.is_even() {
                n >>= 1;
            }
            n
        };
        assert_eq!(odd(g.conductor.clone()), odd(t.radical().clone()));
        for l in &g.locals {
            if l.p != BigUint::from(2u32) {
                assert_eq!(l.f, 1);
            }
        }
    }

    // (c) conductor invariance under every velu step
    let mut rng = Rng(3);
    let mut steps = 0;
    while steps < CASES {
        let e = rng.curve();
        let f = arith::factor_unbounded(e.discriminant().magnitude());
        let g = reduction::global_data(&e, &f).unwrap();
        for (pt, _) in &isogeny::torsion_points(&e).points {
            let step = isogeny::velu(&e, pt).unwrap();
            let fc = arith::factor_unbounded(step.codomain.discriminant().magnitude());
            let gc = reduction::global_data(&step.codomain, &fc).unwrap();
            assert_eq!(gc.conductor, g.conductor);
            steps += 1;
        }
    }

    // (d) derived-triple identities
    let mut rng = Rng(4);
    for _ in 0..CASES {
        let t = rng.triple();
        for cand in t.derive_triples() {
            assert_eq!(&cand.a + &cand.b, cand.c);
            assert!(cand.a.gcd(&cand.b).is_one());
        }
    }

    // (e) minimal model idempotence and |disc| non-increase
    let mut rng = Rng(5);
    for _ in 0..CASES {
        let e = rng.curve();
        let (m, _) = e.minimal_model();
        assert!(m.discriminant().abs() <= e.discriminant().abs());
        assert_eq!(m.minimal_model().0, m);
    }

    // (f) 1728 disc = c4^3 - c6^2
    let mut rng = Rng(6);
    for _ in 0..CASES {
        let e = rng.curve();
        let inv = e.invariants();
        assert_eq!(
            BigInt::from(1728) * &inv.disc,
            &inv.c4 * &inv.c4 * &inv.c4 - &inv.c6 * &inv.c6
        );
    }

    // (g) factor / is_prime against a trial-division oracle below 10^6
    let mut rng = Rng(7);
    for _ in 0..CASES {
        let n = rng.below(1_000_000) + 1;
        let mut m = n;
        let mut oracle = Vec::new();
        let mut d = 2u64;
        while d * d <= m {
            if m % d == 0 {
                let mut v = 0;
                while m % d == 0 {
                    m /= d;
                    v += 1;
                }
                oracle.push((BigUint::from(d), v));
            }
            d += 1;
        }
        if m > 1 {
            oracle.push((BigUint::from(m), 1));
        }
        let f = arith::factor_unbounded(&BigUint::from(n));
        assert_eq!(f.factors(), &oracle[..]);
        assert!(f.is_complete());
        let is_p = oracle.len() == 1 && oracle[0].1 == 1 && n > 1;
        assert_eq!(arith::is_prime(&BigUint::from(n)), is_p);
    }

    let dt = start.elapsed();
    assert!(dt.as_secs_f64() < 120.0, "took {dt:?}");
    println!("criterion 7 PASS: property suites (a)-(g), >=200 cases each ({dt:?})");
}

#[test]
fn criterion_8_budget_and_resume() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();

    // A curve whose discriminant contains the square of a hard semiprime:
    // disc of [0,0,0,0,k] is -432 k^2, and k = M61 * M89 does not split
    // within any desk-scale rho budget.
    let m61 = big("2305843009213693951");
    let m89 = big("618970019642690137449562111");
    let k = &m61 * &m89;
    let hard = format!("999 x 1 [0,0,0,0,{k}] 0 1");
    let good = "39270 x 1 [1,0,0,-1054050116,-12046088636400] 0 4";
    let db = dir.path().join("curves.txt");
    std::fs::write(&db, format!("{good}\n{hard}\n")).unwrap();

    let cfg = SearchConfig {
        inputs: vec![InputSpec {
            path: db,
            format: InputFormat::CremonaAllcurves,
            source: SourceTag::Cremona,
        }],
        budget: 200_000,
        out_dir: dir.path().to_path_buf(),
        ..SearchConfig::default()
    };
    let outcome = pipeline::run_search(&cfg).unwrap();
    assert_eq!(outcome.records.len(), 1, "the good row must survive");
    assert_eq!(outcome.records[0].conductor, big("39270"));
    assert_eq!(outcome.diagnostics.len(), 1);
    assert!(
        outcome.diagnostics[0].message.contains("budget"),
        "diagnostic: {}",
        outcome.diagnostics[0].message
    );

    // Interrupt-and-resume: a full run with a checkpoint, then a resumed run
    // from a truncated copy of that checkpoint must give identical tables.
    let triples = dir.path().join("triples.txt");
    std::fs::write(
        &triples,
        "22771715409 348972425216 371744140625 3^16*23^2 2^13*29^2*37^3 5^9*11^4*13\n\
         10 2187 2197 2*5 3^7 13^3\n\
         1 8 9 1 2^3 3^2\n",
    )
    .unwrap();
    let base_cfg = |out: PathBuf, ckpt: Option<PathBuf>| SearchConfig {
        inputs: vec![InputSpec {
            path: triples.clone(),
            format: InputFormat::TripleCanonical,
            source: SourceTag::HighQuality,
        }],
        twists: vec![BigInt::from(-1), BigInt::from(2)],
        out_dir: out,
        checkpoint: ckpt,
        ..SearchConfig::default()
    };

    let full_dir = dir.path().join("full");
    std::fs::create_dir_all(&full_dir).unwrap();
    let full_ckpt = full_dir.join("ckpt.txt");
    let full = pipeline::run_search(&base_cfg(full_dir.clone(), Some(full_ckpt.clone()))).unwrap();
    let (full_qua, full_tam) =
        tables::emit_tables(&full.records, 1.5, &full_dir, "resume").unwrap();

    // cut the checkpoint mid-item: keep roughly half, ending inside a record
    // block so the last item has no done marker
    let text = std::fs::read_to_string(&full_ckpt).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let cut = lines.len() / 2;
    let truncated: String = lines[..cut].join("\n") + "\n";
    let resume_dir = dir.path().join("resumed");
    std::fs::create_dir_all(&resume_dir).unwrap();
    let resume_ckpt = resume_dir.join("ckpt.txt");
    std::fs::write(&resume_ckpt, truncated).unwrap();

    let resumed =
        pipeline::run_search(&base_cfg(resume_dir.clone(), Some(resume_ckpt))).unwrap();
    let (res_qua, res_tam) =
        tables::emit_tables(&resumed.records, 1.5, &resume_dir, "resume").unwrap();
    assert_eq!(
        std::fs::read(&full_qua).unwrap(),
        std::fs::read(&res_qua).unwrap(),
        "qua tables differ after resume"
    );
    assert_eq!(
        std::fs::read(&full_tam).unwrap(),
        std::fs::read(&res_tam).unwrap(),
        "tam tables differ after resume"
    );

    let dt = start.elapsed();
    println!("criterion 8 PASS: budget-exceeded is non-fatal; resumed tables byte-identical ({dt:?})");
}
