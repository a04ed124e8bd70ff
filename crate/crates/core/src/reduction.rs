//! Tate's algorithm and the global reduction data built from it: Kodaira
//! types, conductor exponents, Tamagawa numbers, and the Tamagawa quality.
//!
//! The algorithm is implemented uniformly for every prime, including 2 and 3:
//! the split/nonsplit decision and the auxiliary quadratic/cubic root counts
//! are done by genuine root analysis over F_p rather than by shortcut
//! formulas that assume p >= 5.

use crate::arith::{self, Factorization, StepBudget};
use crate::curve::{valuation, CurveTransform, WeierstrassCurve};
use crate::real;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("model is not minimal at {0}; caller must pass a minimal model")]
    NonMinimalModel(BigUint),
    #[error("discriminant factorization is incomplete; bad primes unknown")]
    IncompleteDiscriminant,
    #[error("discriminant factorization does not match the curve")]
    DiscriminantMismatch,
    #[error("step budget exhausted inside Tate's algorithm")]
    BudgetExhausted,
    #[error("Tamagawa quality undefined for conductor {0} < 3")]
    ConductorTooSmall(BigUint),
}

/// Kodaira symbol of the special fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KodairaType {
    /// I0 (good reduction)
    I0,
    /// In with n >= 1 (multiplicative)
    I(u32),
    II,
    III,
    IV,
    /// In* with n >= 0
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I0 => write!(f, "I0"),
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    Good,
    SplitMultiplicative,
    NonsplitMultiplicative,
    Additive,
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ReductionKind::Good => "good",
            ReductionKind::SplitMultiplicative => "split-multiplicative",
            ReductionKind::NonsplitMultiplicative => "nonsplit-multiplicative",
            ReductionKind::Additive => "additive",
        };
        f.write_str(s)
    }
}

/// Reduction data of one curve at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalData {
    pub p: BigUint,
    pub kodaira: KodairaType,
    /// conductor exponent
    pub f: u32,
    /// Tamagawa number
    pub c: u64,
    pub kind: ReductionKind,
}

/// Conductor, Tamagawa product and quality of a curve, with the per-prime
/// data it was assembled from.
#[derive(Debug, Clone)]
pub struct GlobalData {
    pub minimal_model: WeierstrassCurve,
    pub conductor: BigUint,
    pub conductor_factors: Vec<(BigUint, u32)>,
    pub tamagawa: BigUint,
    pub q_tau: f64,
    pub locals: Vec<LocalData>,
}

impl GlobalData {
    pub fn tamagawa_factorization(&self) -> Factorization {
        arith::factor_unbounded(&self.tamagawa)
    }

    pub fn conductor_factorization(&self) -> Factorization {
        Factorization::from_known_factors(self.conductor.clone(), &self.conductor_factors)
            .expect("conductor factors are consistent by construction")
    }
}

/// q_tau = ln(tau) ln(ln N) / ln(N); zero when tau = 1.
pub fn tamagawa_quality(tau: &BigUint, n: &BigUint) -> Result<f64, ReductionError> {
    if tau.is_one() {
        return Ok(0.0);
    }
    if *n < BigUint::from(3u32) {
        return Err(ReductionError::ConductorTooSmall(n.clone()));
    }
    let ln_tau = real::ln_uint(tau);
    let ln_n = real::ln_uint(n);
    let ln_ln_n = real::ln_ratio(&ln_n);
    Ok(real::to_f64(&(ln_tau * ln_ln_n / ln_n)))
}

/// Run Tate's algorithm at p on a globally minimal model.
pub fn tate(e_min: &WeierstrassCurve, p: &BigUint) -> Result<LocalData, ReductionError> {
    tate_budgeted(e_min, p, &mut StepBudget::unlimited())
}

pub fn tate_budgeted(
    e_min: &WeierstrassCurve,
    p: &BigUint,
    budget: &mut StepBudget,
) -> Result<LocalData, ReductionError> {
    let pz = BigInt::from(p.clone());
    let inv = e_min.invariants();
    let n = valuation(&inv.disc, &pz);
    if n == 0 {
        return Ok(LocalData {
            p: p.clone(),
            kodaira: KodairaType::I0,
            f: 0,
            c: 1,
            kind: ReductionKind::Good,
        });
    }

    // Move the singular point of the reduced curve to the origin.
    let (x0, y0) = singular_point(e_min, &pz);
    let mut e = e_min
        .transformed(&CurveTransform::integral_shift(x0, BigInt::zero(), y0))
        .expect("integral translation");

    if !inv.c4.is_zero() && valuation(&inv.c4, &pz) == 0 {
        // Multiplicative reduction: the tangent directions at the node are
        // the roots of T^2 + a1 T - a2.
        let split = match quad_roots(&BigInt::one(), &e.a1, &(-&e.a2), &pz) {
            QuadRoots::TwoRational => true,
            QuadRoots::Irrational => false,
            QuadRoots::Double(_) => unreachable!("node has distinct tangents"),
        };
        let c = if split {
            n as u64
        } else if n % 2 == 0 {
            2
        } else {
            1
        };
        return Ok(LocalData {
            p: p.clone(),
            kodaira: KodairaType::I(n),
            f: 1,
            c,
            kind: if split {
                ReductionKind::SplitMultiplicative
            } else {
                ReductionKind::NonsplitMultiplicative
            },
        });
    }

    // Additive reduction from here on; the singular point at the origin
    // gives p | a3, a4, a6.
    let additive = |kodaira, f, c| {
        Ok(LocalData {
            p: p.clone(),
            kodaira,
            f,
            c,
            kind: ReductionKind::Additive,
        })
    };

    if val_or_inf(&e.a6, &pz) < 2 {
        return additive(KodairaType::II, n, 1);
    }
    if val_or_inf(&e.invariants().b8, &pz) < 3 {
        return additive(KodairaType::III, n - 1, 2);
    }
    if val_or_inf(&e.invariants().b6, &pz) < 3 {
        let a3p = exact_div(&e.a3, &pz, 1);
        let a6p2 = exact_div(&e.a6, &pz, 2);
        let c = match quad_roots(&BigInt::one(), &a3p, &(-a6p2), &pz) {
            QuadRoots::TwoRational => 3,
            _ => 1,
        };
        return additive(KodairaType::IV, n - 2, c);
    }

    // Normalise to p | a1, a2; p^2 | a3, a4; p^3 | a6.
    e = normalize_step6(&e, &pz);
    debug_assert!(val_or_inf(&e.a1, &pz) >= 1);
    debug_assert!(val_or_inf(&e.a2, &pz) >= 1);
    debug_assert!(val_or_inf(&e.a3, &pz) >= 2);
    debug_assert!(val_or_inf(&e.a4, &pz) >= 2);
    debug_assert!(val_or_inf(&e.a6, &pz) >= 3);

    // P(T) = T^3 + (a2/p) T^2 + (a4/p^2) T + (a6/p^3) over F_p.
    let pa = exact_div(&e.a2, &pz, 1);
    let pb = exact_div(&e.a4, &pz, 2);
    let pc = exact_div(&e.a6, &pz, 3);
    match cubic_roots(&pa, &pb, &pc, &pz) {
        CubicRoots::Distinct { rational } => {
            additive(KodairaType::IStar(0), n - 4, 1 + rational as u64)
        }
        CubicRoots::Double(root) => {
            e = shift_x(&e, &(&pz * root));
            istar_loop(&e, p, &pz, n, budget)
        }
        CubicRoots::Triple(root) => {
            e = shift_x(&e, &(&pz * root));
            tail_steps(&e, p, &pz, n)
        }
    }
}

/// The In* sub-loop (n >= 1). On entry the cubic had a double root moved to
/// the origin: v(a2) = 1, v(a3) >= 2, v(a4) >= 3, v(a6) >= 4.
fn istar_loop(
    e: &WeierstrassCurve,
    p: &BigUint,
    pz: &BigInt,
    n: u32,
    budget: &mut StepBudget,
) -> Result<LocalData, ReductionError> {
    let mut e = e.clone();
    let mut m: u32 = 1;
    loop {
        if !budget.charge(1) {
            return Err(ReductionError::BudgetExhausted);
        }
        let done = if m % 2 == 1 {
            let k = (m + 3) / 2;
            let a3k = exact_div(&e.a3, pz, k);
            let a62k = exact_div(&e.a6, pz, 2 * k);
            match quad_roots(&BigInt::one(), &a3k, &(-a62k), pz) {
                QuadRoots::TwoRational => Some(4),
                QuadRoots::Irrational => Some(2),
                QuadRoots::Double(y) => {
                    e = shift_y(&e, &(pz.pow(k) * y));
                    None
                }
            }
        } else {
            let k = (m + 4) / 2;
            let a2p = exact_div(&e.a2, pz, 1);
            let a4k = exact_div(&e.a4, pz, k);
            let a62k1 = exact_div(&e.a6, pz, 2 * k - 1);
            match quad_roots(&a2p, &a4k, &a62k1, pz) {
                QuadRoots::TwoRational => Some(4),
                QuadRoots::Irrational => Some(2),
                QuadRoots::Double(x) => {
                    e = shift_x(&e, &(pz.pow(k - 1) * x));
                    None
                }
            }
        };
        if let Some(c) = done {
            debug_assert!(n >= m + 4, "I{m}* needs v(disc) >= {}", m + 4);
            return Ok(LocalData {
                p: p.clone(),
                kodaira: KodairaType::IStar(m),
                f: n - m - 4,
                c,
                kind: ReductionKind::Additive,
            });
        }
        m += 1;
    }
}

/// Steps after a triple root of the step-6 cubic (moved to the origin):
/// IV*, III*, II*, or a non-minimal model.
fn tail_steps(
    e: &WeierstrassCurve,
    p: &BigUint,
    pz: &BigInt,
    n: u32,
) -> Result<LocalData, ReductionError> {
    let mut e = e.clone();
    let additive = |kodaira, f, c| {
        Ok(LocalData {
            p: p.clone(),
            kodaira,
            f,
            c,
            kind: ReductionKind::Additive,
        })
    };
    let a3k = exact_div(&e.a3, pz, 2);
    let a62k = exact_div(&e.a6, pz, 4);
    match quad_roots(&BigInt::one(), &a3k, &(-a62k), pz) {
        QuadRoots::TwoRational => return additive(KodairaType::IVStar, n - 6, 3),
        QuadRoots::Irrational => return additive(KodairaType::IVStar, n - 6, 1),
        QuadRoots::Double(y) => {
            e = shift_y(&e, &(pz.pow(2) * y));
        }
    }
    if val_or_inf(&e.a4, pz) < 4 {
        return additive(KodairaType::IIIStar, n - 7, 2);
    }
    if val_or_inf(&e.a6, pz) < 6 {
        return additive(KodairaType::IIStar, n - 8, 1);
    }
    Err(ReductionError::NonMinimalModel(p.clone()))
}

/// x -> x + r translation.
fn shift_x(e: &WeierstrassCurve, r: &BigInt) -> WeierstrassCurve {
    e.transformed(&CurveTransform::integral_shift(
        r.clone(),
        BigInt::zero(),
        BigInt::zero(),
    ))
    .expect("integral translation")
}

/// y -> y + t translation.
fn shift_y(e: &WeierstrassCurve, t: &BigInt) -> WeierstrassCurve {
    e.transformed(&CurveTransform::integral_shift(
        BigInt::zero(),
        BigInt::zero(),
        t.clone(),
    ))
    .expect("integral translation")
}

/// y -> y + s x translation.
fn shift_s(e: &WeierstrassCurve, s: &BigInt) -> WeierstrassCurve {
    e.transformed(&CurveTransform::integral_shift(
        BigInt::zero(),
        s.clone(),
        BigInt::zero(),
    ))
    .expect("integral translation")
}

/// Coordinate change establishing p | a1, a2; p^2 | a3, a4; p^3 | a6, valid
/// once steps 1-5 have fallen through (v(a6) >= 2, v(b8) >= 3, v(b6) >= 3).
fn normalize_step6(e: &WeierstrassCurve, pz: &BigInt) -> WeierstrassCurve {
    if pz.to_u32() == Some(2) {
        let s = e.a2.mod_floor(pz);
        let e1 = shift_s(e, &s);
        let eight = BigInt::from(8);
        for t in 0..8u32 {
            let t = BigInt::from(t);
            let a3t = &e1.a3 + BigInt::from(2) * &t;
            let a6t = &e1.a6 - &t * &e1.a3 - &t * &t;
            if a3t.mod_floor(&BigInt::from(4)).is_zero() && a6t.mod_floor(&eight).is_zero() {
                return shift_y(&e1, &t);
            }
        }
        unreachable!("step-6 substitution exists when steps 3-5 fail");
    }
    let inv2 = mod_inverse(&BigInt::from(2), pz);
    let s = (-(&e.a1) * &inv2).mod_floor(pz);
    let e1 = shift_s(e, &s);
    let p2 = pz * pz;
    let inv2_p2 = mod_inverse(&BigInt::from(2), &p2);
    let t = (-(&e1.a3) * &inv2_p2).mod_floor(&p2);
    shift_y(&e1, &t)
}

/// Singular point of the reduced curve mod p (exists whenever p | disc).
fn singular_point(e: &WeierstrassCurve, pz: &BigInt) -> (BigInt, BigInt) {
    let inv = e.invariants();
    let (x0, y0);
    if pz.to_u32() == Some(2) {
        x0 = if e.a1.is_odd() {
            e.a3.mod_floor(pz)
        } else {
            e.a4.mod_floor(pz)
        };
        y0 = (&x0 * &x0 * &x0 + &e.a2 * &x0 * &x0 + &e.a4 * &x0 + &e.a6).mod_floor(pz);
    } else {
        x0 = if !inv.c4.is_zero() && valuation(&inv.c4, pz) == 0 {
            // node: the double root of 4x^3 + b2 x^2 + 2 b4 x + b6
            let num = BigInt::from(18) * &inv.b6 - &inv.b2 * &inv.b4;
            (num * mod_inverse(&inv.c4, pz)).mod_floor(pz)
        } else if pz.to_u32() == Some(3) {
            (-&inv.b6).mod_floor(pz)
        } else {
            (-&inv.b2 * mod_inverse(&BigInt::from(12), pz)).mod_floor(pz)
        };
        let inv2 = mod_inverse(&BigInt::from(2), pz);
        y0 = (-(&e.a1 * &x0 + &e.a3) * inv2).mod_floor(pz);
    }
    debug_assert!(is_singular_at(e, &x0, &y0, pz));
    (x0, y0)
}

fn is_singular_at(e: &WeierstrassCurve, x: &BigInt, y: &BigInt, pz: &BigInt) -> bool {
    let f = y * y + &e.a1 * x * y + &e.a3 * y
        - (x * x * x + &e.a2 * x * x + &e.a4 * x + &e.a6);
    let fx = &e.a1 * y - (BigInt::from(3) * x * x + BigInt::from(2) * &e.a2 * x + &e.a4);
    let fy = BigInt::from(2) * y + &e.a1 * x + &e.a3;
    f.mod_floor(pz).is_zero() && fx.mod_floor(pz).is_zero() && fy.mod_floor(pz).is_zero()
}

fn val_or_inf(x: &BigInt, p: &BigInt) -> u32 {
    if x.is_zero() {
        u32::MAX
    } else {
        valuation(x, p)
    }
}

fn exact_div(x: &BigInt, p: &BigInt, k: u32) -> BigInt {
    if x.is_zero() {
        return BigInt::zero();
    }
    let (q, r) = x.div_rem(&p.pow(k));
    debug_assert!(r.is_zero(), "expected p^{k} to divide {x}");
    q
}

fn mod_inverse(x: &BigInt, m: &BigInt) -> BigInt {
    let x = x.mod_floor(m);
    let ext = x.extended_gcd(m);
    debug_assert!(ext.gcd.is_one());
    ext.x.mod_floor(m)
}

/// Root structure of a quadratic a Y^2 + b Y + c over F_p (p prime, p∤a).
#[derive(Debug, Clone, PartialEq, Eq)]
enum QuadRoots {
    /// two distinct roots in F_p
    TwoRational,
    /// two distinct conjugate roots in F_{p^2}
    Irrational,
    /// a double root (returned)
    Double(BigInt),
}

fn quad_roots(a: &BigInt, b: &BigInt, c: &BigInt, pz: &BigInt) -> QuadRoots {
    debug_assert!(!a.mod_floor(pz).is_zero());
    if pz.to_u32() == Some(2) {
        // monic normalisation is the identity mod 2
        let b = b.mod_floor(pz);
        let c = c.mod_floor(pz);
        if b.is_one() {
            if c.is_zero() {
                QuadRoots::TwoRational
            } else {
                QuadRoots::Irrational
            }
        } else {
            QuadRoots::Double(c)
        }
    } else {
        let disc = (b * b - BigInt::from(4) * a * c).mod_floor(pz);
        if disc.is_zero() {
            let inv2a = mod_inverse(&(BigInt::from(2) * a), pz);
            QuadRoots::Double((-b * inv2a).mod_floor(pz))
        } else if is_square_mod(&disc, pz) {
            QuadRoots::TwoRational
        } else {
            QuadRoots::Irrational
        }
    }
}

/// Euler's criterion; p odd, x not divisible by p.
fn is_square_mod(x: &BigInt, pz: &BigInt) -> bool {
    let p = pz.to_biguint().expect("positive prime");
    let exp = (&p - 1u32) >> 1;
    let base = x.mod_floor(pz).to_biguint().unwrap();
    base.modpow(&exp, &p).is_one()
}

/// Root structure of the monic cubic T^3 + A T^2 + B T + C over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
enum CubicRoots {
    Distinct { rational: u32 },
    Double(BigInt),
    Triple(BigInt),
}

fn cubic_roots(a: &BigInt, b: &BigInt, c: &BigInt, pz: &BigInt) -> CubicRoots {
    let a = a.mod_floor(pz);
    let b = b.mod_floor(pz);
    let c = c.mod_floor(pz);
    // universal discriminant of a monic cubic
    let disc = (BigInt::from(18) * &a * &b * &c - BigInt::from(4) * &a * &a * &a * &c
        + &a * &a * &b * &b
        - BigInt::from(4) * &b * &b * &b
        - BigInt::from(27) * &c * &c)
        .mod_floor(pz);
    if !disc.is_zero() {
        return CubicRoots::Distinct {
            rational: count_cubic_roots(&a, &b, &c, pz),
        };
    }
    // triple root?
    let p_small = pz.to_u32();
    let triple = if p_small == Some(2) {
        (a == b && b == c).then(|| a.clone())
    } else if p_small == Some(3) {
        (a.is_zero() && b.is_zero()).then(|| (-&c).mod_floor(pz))
    } else {
        let r = (-&a * mod_inverse(&BigInt::from(3), pz)).mod_floor(pz);
        let horner =
            |t: &BigInt| (((t + &a) * t + &b) * t + &c).mod_floor(pz);
        let deriv = |t: &BigInt| {
            (BigInt::from(3) * t * t + BigInt::from(2) * &a * t + &b).mod_floor(pz)
        };
        (horner(&r).is_zero() && deriv(&r).is_zero()).then_some(r)
    };
    if let Some(r) = triple {
        return CubicRoots::Triple(r);
    }
    // double root extraction
    let root = if p_small == Some(2) {
        b.clone()
    } else {
        // alpha = (9C - AB) / (2(A^2 - 3B)); the denominator is a unit here
        let num = BigInt::from(9) * &c - &a * &b;
        let den = BigInt::from(2) * (&a * &a - BigInt::from(3) * &b);
        (num * mod_inverse(&den, pz)).mod_floor(pz)
    };
    debug_assert!(
        (((&root + &a) * &root + &b) * &root + &c)
            .mod_floor(pz)
            .is_zero(),
        "double root candidate must be a root"
    );
    CubicRoots::Double(root)
}

/// Number of roots in F_p of a monic cubic with distinct roots over the
/// algebraic closure. Small p by direct evaluation, otherwise via
/// deg gcd(T^p - T, P).
fn count_cubic_roots(a: &BigInt, b: &BigInt, c: &BigInt, pz: &BigInt) -> u32 {
    if let Some(p) = pz.to_u32().filter(|p| *p < 16) {
        let mut count = 0;
        for t in 0..p {
            let t = BigInt::from(t);
            if (((&t + a) * &t + b) * &t + c).mod_floor(pz).is_zero() {
                count += 1;
            }
        }
        return count;
    }
    let p_coeffs = vec![c.mod_floor(pz), b.mod_floor(pz), a.mod_floor(pz), BigInt::one()];
    // T^p mod P by square and multiply over F_p[T]/(P)
    let pu = pz.to_biguint().unwrap();
    let mut acc = vec![BigInt::one()];
    let mut base = vec![BigInt::zero(), BigInt::one()];
    for i in 0..pu.bits() {
        if pu.bit(i) {
            acc = poly_mulmod(&acc, &base, &p_coeffs, pz);
        }
        base = poly_mulmod(&base, &base, &p_coeffs, pz);
    }
    // gcd(T^p - T, P)
    if acc.len() < 2 {
        acc.resize(2, BigInt::zero());
    }
    acc[1] -= 1;
    acc[1] = acc[1].mod_floor(pz);
    let g = poly_gcd(&trim(acc), &p_coeffs, pz);
    (g.len().max(1) - 1) as u32
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map(|x| x.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

fn poly_mulmod(a: &[BigInt], b: &[BigInt], modulus: &[BigInt], pz: &BigInt) -> Vec<BigInt> {
    let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            prod[i + j] = (&prod[i + j] + ai * bj).mod_floor(pz);
        }
    }
    poly_rem(trim(prod), modulus, pz)
}

/// Remainder mod a monic modulus.
fn poly_rem(mut a: Vec<BigInt>, modulus: &[BigInt], pz: &BigInt) -> Vec<BigInt> {
    let deg_m = modulus.len() - 1;
    while a.len() > deg_m {
        let lead = a.last().unwrap().clone();
        let shift = a.len() - 1 - deg_m;
        if !lead.is_zero() {
            for (i, mi) in modulus.iter().enumerate() {
                let idx = shift + i;
                a[idx] = (&a[idx] - &lead * mi).mod_floor(pz);
            }
        }
        a.pop();
        a = trim(a);
        if a.is_empty() {
            break;
        }
    }
    a
}

fn poly_gcd(a: &[BigInt], b: &[BigInt], pz: &BigInt) -> Vec<BigInt> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !b.is_empty() {
        // make b monic, then reduce a mod b
        let lead_inv = mod_inverse(b.last().unwrap(), pz);
        for x in &mut b {
            *x = (&*x * &lead_inv).mod_floor(pz);
        }
        let r = poly_rem(a, &b, pz);
        a = b;
        b = r;
    }
    a
}

/// Compute conductor, Tamagawa product and quality of an integral model.
///
/// `disc_factors` must be the complete factorization of |disc(E)|; the bad
/// primes of the minimal model are derived from it. There is no guessing:
/// an incomplete factorization is rejected because a missed prime would
/// silently corrupt tau and q_tau.
pub fn global_data(
    e: &WeierstrassCurve,
    disc_factors: &Factorization,
) -> Result<GlobalData, ReductionError> {
    global_data_budgeted(e, disc_factors, &mut StepBudget::unlimited())
}

pub fn global_data_budgeted(
    e: &WeierstrassCurve,
    disc_factors: &Factorization,
    budget: &mut StepBudget,
) -> Result<GlobalData, ReductionError> {
    if !disc_factors.is_complete() {
        return Err(ReductionError::IncompleteDiscriminant);
    }
    if disc_factors.value() != e.discriminant().magnitude() {
        return Err(ReductionError::DiscriminantMismatch);
    }
    let primes: Vec<BigUint> = disc_factors.distinct_primes().cloned().collect();
    let (e_min, _) = e.minimal_model_with_primes(&primes);
    let disc_min = e_min.discriminant();

    let mut locals = Vec::new();
    let mut conductor = BigUint::one();
    let mut conductor_factors = Vec::new();
    let mut tamagawa = BigUint::one();
    for p in &primes {
        if valuation(&disc_min, &BigInt::from(p.clone())) == 0 {
            continue;
        }
        let local = tate_budgeted(&e_min, p, budget)?;
        conductor *= p.pow(local.f);
        conductor_factors.push((p.clone(), local.f));
        tamagawa *= BigUint::from(local.c);
        locals.push(local);
    }
    let q_tau = tamagawa_quality(&tamagawa, &conductor)?;
    Ok(GlobalData {
        minimal_model: e_min,
        conductor,
        conductor_factors,
        tamagawa,
        q_tau,
        locals,
    })
}
