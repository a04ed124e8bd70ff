//! Rational torsion subgroups and cyclic isogenies via Velu's formulas.
//!
//! Torsion is found on the short model y^2 = x^3 + Ax + B attached to
//! (c4, c6), where torsion points have integer coordinates. Candidate
//! x-coordinates come from integer roots of small division polynomials and
//! point-halving quartics, pre-gated by point counts modulo a few good
//! primes, and every candidate is confirmed by exact order computation.
//! Enumerating square divisors of the discriminant would be hopeless here:
//! the discriminants coming out of good abc-triples are smooth with huge
//! exponents.

use crate::arith::{self, StepBudget};
use crate::curve::WeierstrassCurve;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsogenyError {
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("kernel point has infinite order")]
    InfiniteOrder,
    #[error("step budget exhausted during isogeny enumeration")]
    BudgetExhausted,
}

/// A rational point: infinity or exact affine coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurvePoint {
    Infinity,
    Affine(BigRational, BigRational),
}

impl CurvePoint {
    pub fn affine_int(x: i64, y: i64) -> CurvePoint {
        CurvePoint::Affine(
            BigRational::from_integer(BigInt::from(x)),
            BigRational::from_integer(BigInt::from(y)),
        )
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }
}

pub fn is_on_curve(e: &WeierstrassCurve, pt: &CurvePoint) -> bool {
    match pt {
        CurvePoint::Infinity => true,
        CurvePoint::Affine(x, y) => {
            let r = |v: &BigInt| BigRational::from_integer(v.clone());
            y * y + r(&e.a1) * x * y + r(&e.a3) * y
                == x * x * x + r(&e.a2) * x * x + r(&e.a4) * x + r(&e.a6)
        }
    }
}

pub fn negate(e: &WeierstrassCurve, pt: &CurvePoint) -> CurvePoint {
    match pt {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine(x, y) => {
            let r = |v: &BigInt| BigRational::from_integer(v.clone());
            CurvePoint::Affine(x.clone(), -y - r(&e.a1) * x - r(&e.a3))
        }
    }
}

/// Group law on a general Weierstrass model.
pub fn add(e: &WeierstrassCurve, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
    let r = |v: &BigInt| BigRational::from_integer(v.clone());
    match (p, q) {
        (CurvePoint::Infinity, _) => q.clone(),
        (_, CurvePoint::Infinity) => p.clone(),
        (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => {
            let (lambda, nu) = if x1 == x2 {
                let denom = r(&e.a1) * x1 + r(&e.a3) + BigRational::from_integer(BigInt::from(2)) * y1;
                if denom.is_zero() || y1 != y2 {
                    return CurvePoint::Infinity;
                }
                let three = BigRational::from_integer(BigInt::from(3));
                let two = BigRational::from_integer(BigInt::from(2));
                let lambda =
                    (three * x1 * x1 + two * r(&e.a2) * x1 + r(&e.a4) - r(&e.a1) * y1) / &denom;
                let nu = (-(x1 * x1 * x1) + r(&e.a4) * x1
                    + BigRational::from_integer(BigInt::from(2)) * r(&e.a6)
                    - r(&e.a3) * y1)
                    / &denom;
                (lambda, nu)
            } else {
                let lambda = (y2 - y1) / (x2 - x1);
                let nu = (y1 * x2 - y2 * x1) / (x2 - x1);
                (lambda, nu)
            };
            let x3 = &lambda * &lambda + r(&e.a1) * &lambda - r(&e.a2) - x1 - x2;
            let y3 = -(&lambda + r(&e.a1)) * &x3 - &nu - r(&e.a3);
            CurvePoint::Affine(x3, y3)
        }
    }
}

pub fn multiply(e: &WeierstrassCurve, pt: &CurvePoint, n: u32) -> CurvePoint {
    let mut acc = CurvePoint::Infinity;
    let mut base = pt.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc = add(e, &acc, &base);
        }
        base = add(e, &base, &base);
        n >>= 1;
    }
    acc
}

/// Exact order if it is at most `bound`, None otherwise.
pub fn order_dividing(e: &WeierstrassCurve, pt: &CurvePoint, bound: u32) -> Option<u32> {
    let mut acc = pt.clone();
    for n in 1..=bound {
        if acc.is_infinity() {
            return Some(n);
        }
        acc = add(e, &acc, pt);
    }
    None
}

/// The rational torsion subgroup with its group structure.
#[derive(Debug, Clone)]
pub struct TorsionSubgroup {
    /// all torsion points with their exact orders, infinity included
    pub points: Vec<(CurvePoint, u32)>,
    /// invariants (n1, n2) with the group isomorphic to Z/n1 x Z/n2, n1 | n2
    pub structure: (u32, u32),
}

/// One cyclic isogeny step: kernel generated by a single torsion point.
#[derive(Debug, Clone)]
pub struct IsogenyStep {
    pub domain: WeierstrassCurve,
    pub kernel: CurvePoint,
    pub order: u32,
    /// minimal model of the Velu codomain
    pub codomain: WeierstrassCurve,
}

/// Full rational torsion of an integral model.
pub fn torsion_points(e: &WeierstrassCurve) -> TorsionSubgroup {
    let inv = e.invariants();
    // short model y^2 = x^3 + ax + b via x' = 36x + 3b2, y' = 108(2y + a1x + a3)
    let a = BigInt::from(-27) * &inv.c4;
    let b = BigInt::from(-54) * &inv.c6;

    let bound = torsion_order_bound(&a, &b);
    let mut xs: BTreeSet<BigInt> = BTreeSet::new();

    // 2-torsion: roots of the short cubic
    let two_tors: Vec<BigInt> = if bound % 2 == 0 {
        integer_roots(&[b.clone(), a.clone(), BigInt::zero(), BigInt::one()])
    } else {
        Vec::new()
    };
    xs.extend(two_tors.iter().cloned());

    // odd prime-power orders via division polynomials
    for n in [3u32, 5, 7, 9] {
        if bound % n == 0 {
            xs.extend(integer_roots(&division_poly(n, &a, &b)));
        }
    }

    // orders 4 and 8 by halving 2-torsion (then 4-torsion) points
    if bound % 4 == 0 {
        let mut frontier = two_tors;
        for _ in 0..2 {
            let mut next = Vec::new();
            for x1 in &frontier {
                let quartic = halving_quartic(x1, &a, &b);
                for r in integer_roots(&quartic) {
                    if xs.insert(r.clone()) {
                        next.push(r);
                    }
                }
            }
            if bound % 8 != 0 {
                break;
            }
            frontier = next;
        }
    }

    // lift x-candidates to points on the short curve, then map back to e
    let mut pts: Vec<CurvePoint> = vec![CurvePoint::Infinity];
    for x in &xs {
        let rhs = x * x * x + &a * x + &b;
        if rhs.is_negative() {
            continue;
        }
        let y = rhs.sqrt();
        if &y * &y != rhs {
            continue;
        }
        for yy in [y.clone(), -y] {
            let pt = short_to_curve(e, &inv.b2, x, &yy);
            if is_on_curve(e, &pt) && order_dividing(e, &pt, 12).is_some() {
                if !pts.contains(&pt) {
                    pts.push(pt);
                }
            }
        }
    }

    // close under addition (torsion has at most 16 elements)
    loop {
        let mut grew = false;
        let snapshot = pts.clone();
        for p in &snapshot {
            for q in &snapshot {
                let s = add(e, p, q);
                if !pts.contains(&s) {
                    pts.push(s);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
        assert!(pts.len() <= 16, "torsion exceeded Mazur's bound");
    }

    let mut points: Vec<(CurvePoint, u32)> = pts
        .into_iter()
        .map(|p| {
            let ord = order_dividing(e, &p, 12).expect("torsion order within Mazur bound");
            (p, ord)
        })
        .collect();
    points.sort_by_key(|(_, o)| *o);
    let order = points.len() as u32;
    let exponent = points.iter().map(|(_, o)| *o).max().unwrap_or(1);
    let structure = (order / exponent, exponent);
    debug_assert!(structure.0 == 1 || structure.0 == 2);
    TorsionSubgroup { points, structure }
}

fn short_to_curve(e: &WeierstrassCurve, b2: &BigInt, x: &BigInt, y: &BigInt) -> CurvePoint {
    let r = |v: BigInt| BigRational::from_integer(v);
    let xe = BigRational::new(x - BigInt::from(3) * b2, BigInt::from(36));
    let ye = (BigRational::new(y.clone(), BigInt::from(108))
        - r(e.a1.clone()) * &xe
        - r(e.a3.clone()))
        / BigInt::from(2);
    CurvePoint::Affine(xe, ye)
}

/// Bound on the torsion order from #E(F_q) at a few good odd primes, clipped
/// into Mazur's possibilities.
fn torsion_order_bound(a: &BigInt, b: &BigInt) -> u32 {
    let disc = BigInt::from(-16) * (BigInt::from(4) * a * a * a + BigInt::from(27) * b * b);
    let mut bound: Option<u64> = None;
    let mut used = 0;
    let mut q: u64 = 3;
    while used < 5 {
        if arith::is_prime(&BigUint::from(q)) && !(&disc % BigInt::from(q)).is_zero() {
            let count = point_count_mod(a, b, q);
            bound = Some(match bound {
                None => count,
                Some(g) => g.gcd(&count),
            });
            used += 1;
        }
        q += 2;
        if q > 1000 {
            break;
        }
    }
    // The torsion order divides this; downstream gates only test n | bound,
    // so a large gcd just enables a few extra root searches.
    bound.unwrap_or(12 * 16).min(u32::MAX as u64) as u32
}

fn point_count_mod(a: &BigInt, b: &BigInt, q: u64) -> u64 {
    let qb = BigInt::from(q);
    let am = a.mod_floor(&qb).to_u64().unwrap();
    let bm = b.mod_floor(&qb).to_u64().unwrap();
    let mut is_sq = vec![false; q as usize];
    for t in 0..q {
        is_sq[((t * t) % q) as usize] = true;
    }
    let mut count = 1 + q; // infinity + baseline
    for x in 0..q {
        let rhs = ((x * x % q * x + am * x + bm) % q) as usize;
        if rhs == 0 {
            continue; // one point, already in baseline
        } else if is_sq[rhs] {
            count += 1;
        } else {
            count -= 1;
        }
    }
    count
}

/// g_n(x): the x-part of the n-th division polynomial of y^2 = x^3 + ax + b
/// (even-index polynomials carry an implicit factor 2y).
fn division_poly(n: u32, a: &BigInt, b: &BigInt) -> Vec<BigInt> {
    let f = vec![b.clone(), a.clone(), BigInt::zero(), BigInt::one()];
    let f2 = pmul(&f, &f);
    let g3 = vec![
        -(a * a),
        BigInt::from(12) * b,
        BigInt::from(6) * a,
        BigInt::zero(),
        BigInt::from(3),
    ];
    let g4 = {
        let inner = vec![
            BigInt::from(-8) * b * b - a * a * a,
            BigInt::from(-4) * a * b,
            BigInt::from(-5) * a * a,
            BigInt::from(20) * b,
            BigInt::from(5) * a,
            BigInt::zero(),
            BigInt::one(),
        ];
        pscale(&inner, &BigInt::from(2))
    };
    match n {
        3 => g3,
        5 => {
            // g5 = 16 f^2 g4 g2^3 - g1 g3^3, with g1 = g2 = 1
            let t1 = pscale(&pmul(&f2, &g4), &BigInt::from(16));
            psub(&t1, &pmul(&pmul(&g3, &g3), &g3))
        }
        7 => {
            // g7 = g5 g3^3 - 16 f^2 g2 g4^3
            let g5 = division_poly(5, a, b);
            let t1 = pmul(&g5, &pmul(&pmul(&g3, &g3), &g3));
            let t2 = pscale(&pmul(&f2, &pmul(&pmul(&g4, &g4), &g4)), &BigInt::from(16));
            psub(&t1, &t2)
        }
        9 => {
            // g6 = g3 (g5 - g4^2), g9 = 16 f^2 g6 g4^3 - g3 g5^3
            let g5 = division_poly(5, a, b);
            let g6 = pmul(&g3, &psub(&g5, &pmul(&g4, &g4)));
            let t1 = pscale(
                &pmul(&f2, &pmul(&g6, &pmul(&pmul(&g4, &g4), &g4))),
                &BigInt::from(16),
            );
            let t2 = pmul(&g3, &pmul(&pmul(&g5, &g5), &g5));
            psub(&t1, &t2)
        }
        _ => unreachable!("only odd torsion orders 3,5,7,9 are searched"),
    }
}

/// x-coordinates of points P with x(2P) = x1 are the roots of this quartic.
fn halving_quartic(x1: &BigInt, a: &BigInt, b: &BigInt) -> Vec<BigInt> {
    vec![
        a * a - BigInt::from(4) * b * x1,
        BigInt::from(-8) * b - BigInt::from(4) * a * x1,
        BigInt::from(-2) * a,
        BigInt::from(-4) * x1,
        BigInt::one(),
    ]
}

fn pmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn psub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = a.to_vec();
    out.resize(a.len().max(b.len()), BigInt::zero());
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    out
}

fn pscale(a: &[BigInt], k: &BigInt) -> Vec<BigInt> {
    a.iter().map(|x| x * k).collect()
}

fn peval(f: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// All integer roots of an integer polynomial, by recursive monotone-interval
/// isolation with exact big-integer bisection. No coefficient factoring, so
/// the huge smooth constant terms of division polynomials cost nothing.
pub(crate) fn integer_roots(f: &[BigInt]) -> Vec<BigInt> {
    let f: Vec<BigInt> = {
        let mut v = f.to_vec();
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        v
    };
    if f.len() <= 1 {
        return Vec::new();
    }
    // factor out x^k
    let shift = f.iter().take_while(|c| c.is_zero()).count();
    let mut out = Vec::new();
    if shift > 0 {
        out.push(BigInt::zero());
    }
    let f = &f[shift..];
    if f.len() <= 1 {
        return out;
    }
    let bound = cauchy_bound(f);
    let mut cuts = floor_real_roots_of_derivative(f);
    cuts.insert(0, -&bound - 1);
    cuts.push(&bound + 1);
    cuts.sort();
    cuts.dedup();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0].clone(), w[1].clone());
        // f is monotone on (true critical points); the floors are safe
        // endpoints for integer bisection
        if let Some(r) = bisect_integer_root(f, &lo, &hi) {
            if !out.contains(&r) {
                out.push(r);
            }
        }
    }
    // endpoints themselves
    for c in &cuts {
        if peval(f, c).is_zero() && !out.contains(c) {
            out.push(c.clone());
        }
    }
    out.sort();
    out
}

fn cauchy_bound(f: &[BigInt]) -> BigInt {
    let lead = f.last().unwrap().abs();
    let maxc = f[..f.len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    BigInt::one() + maxc.div_ceil(&lead)
}

/// Floors of all real roots of f', recursively.
fn floor_real_roots_of_derivative(f: &[BigInt]) -> Vec<BigInt> {
    let deriv: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i as u64))
        .collect();
    floor_real_roots(&deriv)
}

fn floor_real_roots(f: &[BigInt]) -> Vec<BigInt> {
    let f: Vec<BigInt> = {
        let mut v = f.to_vec();
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        v
    };
    if f.len() <= 1 {
        return Vec::new();
    }
    if f.len() == 2 {
        // c0 + c1 x = 0
        return vec![(-&f[0]).div_floor(&f[1])];
    }
    let bound = cauchy_bound(&f);
    let mut cuts = floor_real_roots_of_derivative(&f);
    cuts.insert(0, -&bound - 1);
    cuts.push(&bound + 1);
    cuts.sort();
    cuts.dedup();
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        if let Some(fl) = bisect_floor(&f, &w[0], &w[1]) {
            out.push(fl);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// On a monotone stretch [lo, hi], the floor of the real root if a sign
/// change occurs.
fn bisect_floor(f: &[BigInt], lo: &BigInt, hi: &BigInt) -> Option<BigInt> {
    let mut flo = peval(f, lo);
    if flo.is_zero() {
        return Some(lo.clone());
    }
    let fhi = peval(f, hi);
    if fhi.is_zero() {
        return Some(hi.clone());
    }
    if flo.sign() == fhi.sign() {
        return None;
    }
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        let fm = peval(f, &mid);
        if fm.is_zero() {
            return Some(mid);
        }
        if fm.sign() == flo.sign() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

fn bisect_integer_root(f: &[BigInt], lo: &BigInt, hi: &BigInt) -> Option<BigInt> {
    let fl = bisect_floor(f, lo, hi)?;
    if peval(f, &fl).is_zero() {
        Some(fl)
    } else {
        let up = &fl + 1;
        if peval(f, &up).is_zero() {
            Some(up)
        } else {
            None
        }
    }
}

/// Codomain of the cyclic isogeny with kernel generated by `p` (Velu), as a
/// minimal model. `extra_primes` should cover the bad primes of the domain;
/// small primes are always included.
pub fn velu(e: &WeierstrassCurve, p: &CurvePoint) -> Result<IsogenyStep, IsogenyError> {
    let disc = e.discriminant();
    let primes: Vec<BigUint> = arith::factor_unbounded(disc.magnitude())
        .distinct_primes()
        .cloned()
        .collect();
    velu_with_primes(e, p, &primes)
}

pub fn velu_with_primes(
    e: &WeierstrassCurve,
    p: &CurvePoint,
    primes: &[BigUint],
) -> Result<IsogenyStep, IsogenyError> {
    if !is_on_curve(e, p) {
        return Err(IsogenyError::PointNotOnCurve);
    }
    let order = order_dividing(e, p, 12).ok_or(IsogenyError::InfiniteOrder)?;
    if order == 1 {
        let (m, _) = e.minimal_model_with_primes(primes);
        return Ok(IsogenyStep {
            domain: e.clone(),
            kernel: p.clone(),
            order,
            codomain: m,
        });
    }

    let r = |v: &BigInt| BigRational::from_integer(v.clone());
    let two = BigRational::from_integer(BigInt::from(2));
    let three = BigRational::from_integer(BigInt::from(3));
    let inv = e.invariants();

    let mut v = BigRational::zero();
    let mut w = BigRational::zero();
    let mut q = p.clone();
    for k in 1..order {
        if let CurvePoint::Affine(x, y) = &q {
            // use each +-pair once; 2-torsion points are their own negative
            let is_two = multiply(e, &q, 2).is_infinity();
            if is_two || k <= order - k {
                let gx = &three * x * x + &two * r(&e.a2) * x + r(&e.a4) - r(&e.a1) * y;
                let gy = -&two * y - r(&e.a1) * x - r(&e.a3);
                let vq = if is_two {
                    gx.clone()
                } else {
                    &two * &gx - r(&e.a1) * &gy
                };
                let uq = &gy * &gy;
                v += &vq;
                w += uq + x * vq;
            }
        }
        q = add(e, &q, p);
    }
    let a4_new = r(&e.a4) - BigRational::from_integer(BigInt::from(5)) * &v;
    let a6_new = r(&e.a6) - r(&inv.b2) * &v - BigRational::from_integer(BigInt::from(7)) * &w;

    // Clear denominators by scaling with u = lcm of them; any overshoot is
    // removed again by the minimization that follows.
    let u: BigInt = a4_new.denom().lcm(a6_new.denom());
    let scaled = WeierstrassCurve::new(
        &e.a1 * &u,
        &e.a2 * (&u * &u),
        &e.a3 * (&u * &u * &u),
        (a4_new * BigRational::from_integer(u.pow(4))).to_integer(),
        (a6_new * BigRational::from_integer(u.pow(6))).to_integer(),
    )
    .expect("isogenous curve is nonsingular");

    let mut all_primes: Vec<BigUint> = primes.to_vec();
    for extra in [2u32, 3, 5, 7] {
        let extra = BigUint::from(extra);
        if !all_primes.contains(&extra) {
            all_primes.push(extra);
        }
    }
    for (p, _) in arith::factor_unbounded(u.magnitude()).factors() {
        if !all_primes.contains(p) {
            all_primes.push(p.clone());
        }
    }
    let (codomain, _) = scaled.minimal_model_with_primes(&all_primes);
    Ok(IsogenyStep {
        domain: e.clone(),
        kernel: p.clone(),
        order,
        codomain,
    })
}

/// Minimal models of the curves reachable by chains of at most `depth`
/// cyclic isogenies with torsion-point kernels. Depth 1 takes one codomain
/// per torsion point of E (including E itself, from the kernel at infinity);
/// deeper levels repeat on the new curves. Output is deduplicated and sorted
/// by the canonical coefficient rendering.
pub fn enumerate_isogenous(
    e: &WeierstrassCurve,
    depth: u32,
) -> Result<Vec<WeierstrassCurve>, IsogenyError> {
    let primes: Vec<BigUint> = arith::factor_unbounded(e.discriminant().magnitude())
        .distinct_primes()
        .cloned()
        .collect();
    enumerate_isogenous_budgeted(e, depth, &primes, &mut StepBudget::unlimited())
}

pub fn enumerate_isogenous_budgeted(
    e: &WeierstrassCurve,
    depth: u32,
    primes: &[BigUint],
    budget: &mut StepBudget,
) -> Result<Vec<WeierstrassCurve>, IsogenyError> {
    assert!(depth >= 1);
    let (start, _) = e.minimal_model_with_primes(primes);
    let mut seen: BTreeSet<WeierstrassCurve> = BTreeSet::new();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    for _ in 0..depth {
        let mut next = Vec::new();
        for cur in &frontier {
            let torsion = torsion_points(cur);
            for (pt, _) in &torsion.points {
                if !budget.charge(1) {
                    return Err(IsogenyError::BudgetExhausted);
                }
                let step = velu_with_primes(cur, pt, primes)?;
                if seen.insert(step.codomain.clone()) {
                    next.push(step.codomain);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let mut out: Vec<WeierstrassCurve> = seen.into_iter().collect();
    out.sort_by_key(|c| c.to_string());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abc::AbcTriple;
    use crate::reduction;

    fn curve(c: [i64; 5]) -> WeierstrassCurve {
        WeierstrassCurve::from_i64(c).unwrap()
    }

    #[test]
    fn integer_root_isolation() {
        // (x-3)(x+5)(x-1000000007)
        let f = pmul(
            &pmul(
                &[BigInt::from(-3), BigInt::one()],
                &[BigInt::from(5), BigInt::one()],
            ),
            &[BigInt::from(-1000000007i64), BigInt::one()],
        );
        assert_eq!(
            integer_roots(&f),
            vec![BigInt::from(-5), BigInt::from(3), BigInt::from(1000000007i64)]
        );
        // no integer roots
        let g = vec![BigInt::from(7), BigInt::zero(), BigInt::one()];
        assert!(integer_roots(&g).is_empty());
        // x^2 (double root at zero after factoring x^k)
        let h = vec![BigInt::zero(), BigInt::zero(), BigInt::one()];
        assert_eq!(integer_roots(&h), vec![BigInt::zero()]);
    }

    #[test]
    fn group_law_on_named_curve() {
        // y^2 = x^3 + 1 has the order-6 point (2, 3)
        let e = curve([0, 0, 0, 0, 1]);
        let p = CurvePoint::affine_int(2, 3);
        assert!(is_on_curve(&e, &p));
        assert_eq!(order_dividing(&e, &p, 12), Some(6));
        let p3 = multiply(&e, &p, 3);
        assert_eq!(p3, CurvePoint::affine_int(-1, 0));
    }

    #[test]
    fn frey_curve_has_full_two_torsion() {
        let t = AbcTriple::new(1u32.into(), 8u32.into(), 9u32.into()).unwrap();
        let e = WeierstrassCurve::frey(&t, &BigInt::from(1)).unwrap();
        let tor = torsion_points(&e);
        for (x, y) in [(0i64, 0i64), (1, 0), (-8, 0)] {
            let pt = CurvePoint::affine_int(x, y);
            assert!(
                tor.points.iter().any(|(p, _)| p == &pt),
                "missing 2-torsion ({x},{y})"
            );
        }
        assert_eq!(tor.structure.0, 2);
    }

    #[test]
    fn torsion_of_j_zero_curve() {
        let e = curve([0, 0, 0, 0, 1]);
        let tor = torsion_points(&e);
        assert_eq!(tor.points.len(), 6);
        assert_eq!(tor.structure, (1, 6));
        assert!(tor
            .points
            .iter()
            .any(|(p, o)| *o == 6 && *p == CurvePoint::affine_int(2, 3)));
        assert!(tor
            .points
            .iter()
            .any(|(p, o)| *o == 2 && *p == CurvePoint::affine_int(-1, 0)));
    }

    #[test]
    fn torsion_with_single_two_torsion_point() {
        let e = curve([0, -14, 0, 81, 0]);
        let tor = torsion_points(&e);
        let two: Vec<_> = tor.points.iter().filter(|(_, o)| *o == 2).collect();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].0, CurvePoint::affine_int(0, 0));
    }

    #[test]
    fn velu_two_isogeny_classical_codomain() {
        // y^2 = x^3 + 7x^2 - 8x with kernel (0,0): codomain is isomorphic to
        // y^2 = x^3 - 14x^2 + 81x
        let e = curve([0, 7, 0, -8, 0]);
        let step = velu(&e, &CurvePoint::affine_int(0, 0)).unwrap();
        assert_eq!(step.order, 2);
        let expected = curve([0, -14, 0, 81, 0]);
        assert!(step.codomain.is_isomorphic(&expected).is_some());
    }

    #[test]
    fn velu_identity_kernel() {
        let e = curve([0, 7, 0, -8, 0]);
        let step = velu(&e, &CurvePoint::Infinity).unwrap();
        assert!(step.codomain.is_isomorphic(&e).is_some());
    }

    #[test]
    fn velu_rejects_bad_points() {
        let e = curve([0, 7, 0, -8, 0]);
        assert!(matches!(
            velu(&e, &CurvePoint::affine_int(5, 5)),
            Err(IsogenyError::PointNotOnCurve)
        ));
        // (3, 5) has infinite order on y^2 = x^3 - 2
        let e2 = curve([0, 0, 0, 0, -2]);
        assert!(matches!(
            velu(&e2, &CurvePoint::affine_int(3, 5)),
            Err(IsogenyError::InfiniteOrder)
        ));
    }

    #[test]
    fn isogeny_preserves_conductor() {
        let e = curve([0, 7, 0, -8, 0]);
        let f = arith::factor_unbounded(e.discriminant().magnitude());
        let g_dom = reduction::global_data(&e, &f).unwrap();
        let step = velu(&e, &CurvePoint::affine_int(0, 0)).unwrap();
        let f2 = arith::factor_unbounded(step.codomain.discriminant().magnitude());
        let g_cod = reduction::global_data(&step.codomain, &f2).unwrap();
        assert_eq!(g_dom.conductor, g_cod.conductor);
    }

    #[test]
    fn enumerate_small_frey() {
        let t = AbcTriple::new(1u32.into(), 8u32.into(), 9u32.into()).unwrap();
        let e = WeierstrassCurve::frey(&t, &BigInt::from(1)).unwrap();
        let curves = enumerate_isogenous(&e, 1).unwrap();
        assert!(curves.len() >= 2);
        // all reachable curves share the conductor
        let mut conductors = BTreeSet::new();
        for c in &curves {
            let f = arith::factor_unbounded(c.discriminant().magnitude());
            conductors.insert(reduction::global_data(c, &f).unwrap().conductor);
        }
        assert_eq!(conductors.len(), 1);
        // deterministic ordering by rendering
        let again = enumerate_isogenous(&e, 1).unwrap();
        assert_eq!(curves, again);
    }
}
