//! abc-triples: validation, quality, merit, classification, and the
//! triples-from-triples constructions.

use crate::arith::{self, Factorization, StepBudget};
use crate::real;
use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TripleError {
    #[error("a + b != c")]
    SumMismatch,
    #[error("gcd(a, b) > 1")]
    NotCoprime,
    #[error("need 0 < a < b")]
    BadOrdering,
    #[error("factoring ran out of budget on {0}")]
    FactoringIncomplete(BigUint),
    #[error("merit undefined: radical below 3")]
    MeritUndefined,
}

/// A validated triple a + b = c with cached factorizations and radical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbcTriple {
    a: BigUint,
    b: BigUint,
    c: BigUint,
    fa: Factorization,
    fb: Factorization,
    fc: Factorization,
    radical: BigUint,
}

/// Quality bands used throughout: the boundary q = 1.4 counts as high
/// quality and q = 1.3 as plain (boundaries never occur for real triples).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QualityBand {
    SubAbc,
    Plain,
    MediumQuality,
    HighQuality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleCategory {
    pub band: QualityBand,
    pub high_merit: bool,
}

pub const MEDIUM_QUALITY_MIN: f64 = 1.3;
pub const HIGH_QUALITY_MIN: f64 = 1.4;
pub const HIGH_MERIT_MIN: f64 = 24.0;

impl fmt::Display for QualityBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            QualityBand::SubAbc => "sub-abc",
            QualityBand::Plain => "plain",
            QualityBand::MediumQuality => "medium-quality",
            QualityBand::HighQuality => "high-quality",
        };
        f.write_str(s)
    }
}

impl AbcTriple {
    /// Validate and factor a candidate triple.
    pub fn new(a: BigUint, b: BigUint, c: BigUint) -> Result<AbcTriple, TripleError> {
        Self::new_with_budget(a, b, c, &mut StepBudget::unlimited())
    }

    pub fn new_with_budget(
        a: BigUint,
        b: BigUint,
        c: BigUint,
        budget: &mut StepBudget,
    ) -> Result<AbcTriple, TripleError> {
        check_shape(&a, &b, &c)?;
        let fa = arith::factor(&a, budget);
        let fb = arith::factor(&b, budget);
        let fc = arith::factor(&c, budget);
        Self::from_parts(a, b, c, fa, fb, fc)
    }

    /// Trusted-factorization path: the factorizations are verified against
    /// the values (product and primality), then adopted without factoring.
    pub fn with_factorizations(
        a: BigUint,
        b: BigUint,
        c: BigUint,
        fa: &[(BigUint, u32)],
        fb: &[(BigUint, u32)],
        fc: &[(BigUint, u32)],
    ) -> Result<AbcTriple, TripleError> {
        check_shape(&a, &b, &c)?;
        let fa = Factorization::from_known_factors(a.clone(), fa)
            .map_err(|_| TripleError::FactoringIncomplete(a.clone()))?;
        let fb = Factorization::from_known_factors(b.clone(), fb)
            .map_err(|_| TripleError::FactoringIncomplete(b.clone()))?;
        let fc = Factorization::from_known_factors(c.clone(), fc)
            .map_err(|_| TripleError::FactoringIncomplete(c.clone()))?;
        Self::from_parts(a, b, c, fa, fb, fc)
    }

    fn from_parts(
        a: BigUint,
        b: BigUint,
        c: BigUint,
        fa: Factorization,
        fb: Factorization,
        fc: Factorization,
    ) -> Result<AbcTriple, TripleError> {
        for f in [&fa, &fb, &fc] {
            if !f.is_complete() {
                return Err(TripleError::FactoringIncomplete(f.value().clone()));
            }
        }
        let radical = arith::radical(&[&fa, &fb, &fc])
            .map_err(|_| TripleError::FactoringIncomplete(c.clone()))?;
        Ok(AbcTriple {
            a,
            b,
            c,
            fa,
            fb,
            fc,
            radical,
        })
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }
    pub fn b(&self) -> &BigUint {
        &self.b
    }
    pub fn c(&self) -> &BigUint {
        &self.c
    }
    pub fn factor_a(&self) -> &Factorization {
        &self.fa
    }
    pub fn factor_b(&self) -> &Factorization {
        &self.fb
    }
    pub fn factor_c(&self) -> &Factorization {
        &self.fc
    }
    pub fn radical(&self) -> &BigUint {
        &self.radical
    }

    /// q = ln c / ln r.
    pub fn quality(&self) -> f64 {
        let lnc = real::ln_uint(&self.c);
        let lnr = real::ln_uint(&self.radical);
        real::to_f64(&(lnc / lnr))
    }

    /// m = (q - 1)^2 ln r ln ln r, natural logs throughout.
    pub fn merit(&self) -> Result<f64, TripleError> {
        if self.radical < BigUint::from(3u32) {
            return Err(TripleError::MeritUndefined);
        }
        let lnc = real::ln_uint(&self.c);
        let lnr = real::ln_uint(&self.radical);
        let lnlnr = real::ln_ratio(&lnr);
        let q_minus_1: BigRational = lnc / &lnr - BigRational::one();
        let m = &q_minus_1 * &q_minus_1 * lnr * lnlnr;
        Ok(real::to_f64(&m))
    }

    pub fn classify(&self) -> TripleCategory {
        let q = self.quality();
        let band = if q <= 1.0 {
            QualityBand::SubAbc
        } else if q <= MEDIUM_QUALITY_MIN {
            QualityBand::Plain
        } else if q < HIGH_QUALITY_MIN {
            QualityBand::MediumQuality
        } else {
            QualityBand::HighQuality
        };
        let high_merit = self.merit().map(|m| m > HIGH_MERIT_MIN).unwrap_or(false);
        TripleCategory { band, high_merit }
    }

    /// The four derived-triple candidates, in label order A1..A4.
    pub fn derive_triples(&self) -> Vec<DerivedCandidate> {
        self.derive_triples_with_budget(&mut StepBudget::unlimited())
    }

    pub fn derive_triples_with_budget(&self, budget: &mut StepBudget) -> Vec<DerivedCandidate> {
        let d = &self.a + &self.c;
        let e = &self.b + &self.c;
        let fd = arith::factor(&d, budget);
        let fe = arith::factor(&e, budget);

        let raw = raw_candidates(&self.a, &self.b, &self.c);
        let mut out = Vec::with_capacity(4);
        for (label, (ra, rb, rc)) in ["A1", "A2", "A3", "A4"].iter().zip(raw.into_iter()) {
            let uses = match *label {
                "A1" | "A2" => &fd,
                _ => &fe,
            };
            let outcome = if !uses.is_complete() {
                Err(TripleError::FactoringIncomplete(uses.value().clone()))
            } else {
                let maps = candidate_factor_maps(label, self, &fd, &fe);
                build_candidate(&ra, &rb, &rc, maps)
            };
            out.push(DerivedCandidate {
                label,
                a: ra,
                b: rb,
                c: rc,
                outcome,
            });
        }
        out
    }
}

impl fmt::Display for AbcTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.a, self.b, self.c)
    }
}

fn check_shape(a: &BigUint, b: &BigUint, c: &BigUint) -> Result<(), TripleError> {
    if a + b != *c {
        return Err(TripleError::SumMismatch);
    }
    if a.is_zero() || a >= b {
        return Err(TripleError::BadOrdering);
    }
    if !a.gcd(b).is_one() {
        return Err(TripleError::NotCoprime);
    }
    Ok(())
}

/// One entry of the triples-from-triples output: the candidate numbers are
/// always reported, with the validation outcome (invalid candidates carry
/// their failure reason instead of being dropped).
#[derive(Debug, Clone)]
pub struct DerivedCandidate {
    pub label: &'static str,
    pub a: BigUint,
    pub b: BigUint,
    pub c: BigUint,
    pub outcome: Result<AbcTriple, TripleError>,
}

impl DerivedCandidate {
    pub fn quality(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|t| t.quality())
    }
}

/// The four raw constructions with their swap/divide normalisations, written
/// against d = a + c and e = b + c:
///   A1 = (a^2, bd, c^2)
///   A2 = (b^2, 4ac, d^2)   divide by 4 if b even, swap if out of order
///   A3 = (b^2, ae, c^2)    swap if out of order
///   A4 = (a^2, 4bc, e^2)   divide by 4 if a even
pub fn raw_candidates(
    a: &BigUint,
    b: &BigUint,
    c: &BigUint,
) -> [(BigUint, BigUint, BigUint); 4] {
    let d = a + c;
    let e = b + c;
    let four = BigUint::from(4u32);

    let a1 = (a * a, b * &d, c * c);

    let mut a2 = (b * b, &four * a * c, &d * &d);
    if b.is_even() {
        a2 = (a2.0 / &four, a2.1 / &four, a2.2 / &four);
    }
    if a2.0 > a2.1 {
        std::mem::swap(&mut a2.0, &mut a2.1);
    }

    let mut a3 = (b * b, a * &e, c * c);
    if a3.0 > a3.1 {
        std::mem::swap(&mut a3.0, &mut a3.1);
    }

    let mut a4 = (a * a, &four * b * c, &e * &e);
    if a.is_even() {
        a4 = (a4.0 / &four, a4.1 / &four, a4.2 / &four);
    }
    if a4.0 > a4.1 {
        std::mem::swap(&mut a4.0, &mut a4.1);
    }

    [a1, a2, a3, a4]
}

type FactorMap = BTreeMap<BigUint, u32>;

fn map_of(f: &Factorization) -> FactorMap {
    f.factors().iter().cloned().collect()
}

fn map_mul(into: &mut FactorMap, other: &FactorMap, times: u32) {
    for (p, e) in other {
        *into.entry(p.clone()).or_insert(0) += e * times;
    }
}

fn map_div_pow2(map: &mut FactorMap, k: u32) {
    let two = BigUint::from(2u32);
    let e = map.get_mut(&two).expect("dividing by 4 without factors of 2");
    assert!(*e >= k);
    *e -= k;
    if *e == 0 {
        map.remove(&two);
    }
}

/// Factor maps for (A, B, C) of one candidate, assembled from the cached
/// factorizations so the big products are never refactored.
fn candidate_factor_maps(
    label: &str,
    t: &AbcTriple,
    fd: &Factorization,
    fe: &Factorization,
) -> [FactorMap; 3] {
    let (fa, fb, fc) = (map_of(&t.fa), map_of(&t.fb), map_of(&t.fc));
    let (fd, fe) = (map_of(fd), map_of(fe));
    let sq = |m: &FactorMap| {
        let mut s = FactorMap::new();
        map_mul(&mut s, m, 2);
        s
    };
    let two = BigUint::from(2u32);
    match label {
        "A1" => {
            let mut mid = fb;
            map_mul(&mut mid, &fd, 1);
            [sq(&fa), mid, sq(&fc)]
        }
        "A2" => {
            let mut first = sq(&fb);
            let mut mid = fa;
            map_mul(&mut mid, &fc, 1);
            *mid.entry(two).or_insert(0) += 2;
            let mut last = sq(&fd);
            if t.b.is_even() {
                map_div_pow2(&mut first, 2);
                map_div_pow2(&mut mid, 2);
                map_div_pow2(&mut last, 2);
            }
            if t.b() * t.b() > BigUint::from(4u32) * t.a() * t.c() {
                std::mem::swap(&mut first, &mut mid);
            }
            [first, mid, last]
        }
        "A3" => {
            let mut first = sq(&fb);
            let mut mid = fa;
            map_mul(&mut mid, &fe, 1);
            if t.b() * t.b() > t.a() * (t.b() + t.c()) {
                std::mem::swap(&mut first, &mut mid);
            }
            [first, mid, sq(&fc)]
        }
        "A4" => {
            let mut first = sq(&fa);
            let mut mid = fb;
            map_mul(&mut mid, &fc, 1);
            *mid.entry(two).or_insert(0) += 2;
            let mut last = sq(&fe);
            if t.a.is_even() {
                map_div_pow2(&mut first, 2);
                map_div_pow2(&mut mid, 2);
                map_div_pow2(&mut last, 2);
            }
            if t.a() * t.a() > BigUint::from(4u32) * t.b() * t.c() {
                std::mem::swap(&mut first, &mut mid);
            }
            [first, mid, last]
        }
        _ => unreachable!(),
    }
}

fn build_candidate(
    a: &BigUint,
    b: &BigUint,
    c: &BigUint,
    maps: [FactorMap; 3],
) -> Result<AbcTriple, TripleError> {
    let to_pairs = |m: &FactorMap| m.iter().map(|(p, e)| (p.clone(), *e)).collect::<Vec<_>>();
    AbcTriple::with_factorizations(
        a.clone(),
        b.clone(),
        c.clone(),
        &to_pairs(&maps[0]),
        &to_pairs(&maps[1]),
        &to_pairs(&maps[2]),
    )
}
