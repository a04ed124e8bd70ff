//! Integral Weierstrass models: invariants, Frey-Hellegouarch construction,
//! quadratic twists, global minimal models, isomorphism testing.
//!
//! All coefficient arithmetic is exact; the curves coming out of the paper's
//! constructions overflow any fixed-width integer long before they get
//! interesting.

use crate::abc::AbcTriple;
use crate::arith;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("discriminant is zero: curve is singular")]
    SingularCurve,
    #[error("twist parameter must be a nonzero squarefree integer, got {0}")]
    BadTwist(BigInt),
    #[error("coordinate change does not produce an integral model")]
    NonIntegralModel,
}

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer coefficients
/// and nonzero discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeierstrassCurve {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
}

/// The standard derived quantities of a model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub disc: BigInt,
}

impl Invariants {
    pub fn j(&self) -> BigRational {
        BigRational::new(self.c4.pow(3), self.disc.clone())
    }
}

/// Change of coordinates x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveTransform {
    pub u: BigRational,
    pub r: BigRational,
    pub s: BigRational,
    pub t: BigRational,
}

impl CurveTransform {
    pub fn identity() -> Self {
        CurveTransform {
            u: BigRational::one(),
            r: BigRational::zero(),
            s: BigRational::zero(),
            t: BigRational::zero(),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &CurveTransform) -> CurveTransform {
        let u1 = &self.u;
        let u1_2 = u1 * u1;
        let u1_3 = &u1_2 * u1;
        CurveTransform {
            u: u1 * &next.u,
            r: &u1_2 * &next.r + &self.r,
            s: u1 * &next.s + &self.s,
            t: &u1_3 * &next.t + &u1_2 * &self.s * &next.r + &self.t,
        }
    }

    pub fn inverse(&self) -> CurveTransform {
        let u_inv = self.u.recip();
        let u_inv2 = &u_inv * &u_inv;
        let u_inv3 = &u_inv2 * &u_inv;
        let r = -&self.r * &u_inv2;
        CurveTransform {
            u: u_inv.clone(),
            r: r.clone(),
            s: -&self.s * &u_inv,
            t: (&self.r * &self.s - &self.t) * &u_inv3,
        }
    }

    pub(crate) fn integral_shift(r: BigInt, s: BigInt, t: BigInt) -> CurveTransform {
        CurveTransform {
            u: BigRational::one(),
            r: BigRational::from_integer(r),
            s: BigRational::from_integer(s),
            t: BigRational::from_integer(t),
        }
    }
}

impl WeierstrassCurve {
    pub fn new(
        a1: BigInt,
        a2: BigInt,
        a3: BigInt,
        a4: BigInt,
        a6: BigInt,
    ) -> Result<WeierstrassCurve, CurveError> {
        let e = WeierstrassCurve { a1, a2, a3, a4, a6 };
        if e.invariants().disc.is_zero() {
            return Err(CurveError::SingularCurve);
        }
        Ok(e)
    }

    pub fn from_i64(c: [i64; 5]) -> Result<WeierstrassCurve, CurveError> {
        WeierstrassCurve::new(
            BigInt::from(c[0]),
            BigInt::from(c[1]),
            BigInt::from(c[2]),
            BigInt::from(c[3]),
            BigInt::from(c[4]),
        )
    }

    pub fn invariants(&self) -> Invariants {
        let k = BigInt::from;
        let b2: BigInt = &self.a1 * &self.a1 + k(4) * &self.a2;
        let b4: BigInt = k(2) * &self.a4 + &self.a1 * &self.a3;
        let b6: BigInt = &self.a3 * &self.a3 + k(4) * &self.a6;
        let b8: BigInt = &self.a1 * &self.a1 * &self.a6 + k(4) * &self.a2 * &self.a6
            - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4;
        let c4: BigInt = &b2 * &b2 - k(24) * &b4;
        let c6: BigInt = -(&b2 * &b2 * &b2) + k(36) * &b2 * &b4 - k(216) * &b6;
        let disc: BigInt = -(&b2 * &b2 * &b8) - k(8) * &b4 * &b4 * &b4 - k(27) * &b6 * &b6
            + k(9) * &b2 * &b4 * &b6;
        debug_assert_eq!(k(4) * &b8, &b2 * &b6 - &b4 * &b4);
        debug_assert_eq!(k(1728) * &disc, &c4 * &c4 * &c4 - &c6 * &c6);
        Invariants {
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            disc,
        }
    }

    pub fn discriminant(&self) -> BigInt {
        self.invariants().disc
    }

    pub fn j_invariant(&self) -> BigRational {
        self.invariants().j()
    }

    /// Twisted Frey-Hellegouarch curve of a triple:
    /// d y^2 = x (x - a)(x + b), as the model [0, d(b-a), 0, -d^2 ab, 0].
    pub fn frey(triple: &AbcTriple, d: &BigInt) -> Result<WeierstrassCurve, CurveError> {
        check_squarefree_twist(d)?;
        let a = BigInt::from(triple.a().clone());
        let b = BigInt::from(triple.b().clone());
        WeierstrassCurve::new(
            BigInt::zero(),
            d * (&b - &a),
            BigInt::zero(),
            -(d * d) * &a * &b,
            BigInt::zero(),
        )
    }

    /// Quadratic twist by a squarefree d: the returned model has the same
    /// j-invariant and becomes isomorphic to `self` over Q(sqrt(d)).
    pub fn quadratic_twist(&self, d: &BigInt) -> Result<WeierstrassCurve, CurveError> {
        check_squarefree_twist(d)?;
        if self.a1.is_zero() && self.a3.is_zero() {
            return WeierstrassCurve::new(
                BigInt::zero(),
                d * &self.a2,
                BigInt::zero(),
                d * d * &self.a4,
                d * d * d * &self.a6,
            );
        }
        // Complete the square first (on the b-invariants), then twist.
        let inv = self.invariants();
        WeierstrassCurve::new(
            BigInt::zero(),
            d * &inv.b2,
            BigInt::zero(),
            8 * d * d * &inv.b4,
            16 * d * d * d * &inv.b6,
        )
    }

    /// Apply a change of coordinates; errors when the image is not integral.
    pub fn transformed(&self, tr: &CurveTransform) -> Result<WeierstrassCurve, CurveError> {
        let rat = |x: &BigInt| BigRational::from_integer(x.clone());
        let two = BigRational::from_integer(BigInt::from(2));
        let three = BigRational::from_integer(BigInt::from(3));
        let (u, r, s, t) = (&tr.u, &tr.r, &tr.s, &tr.t);
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        let a1 = (rat(&self.a1) + &two * s) / u;
        let a2 = (rat(&self.a2) - s * rat(&self.a1) + &three * r - s * s) / &u2;
        let a3 = (rat(&self.a3) + r * rat(&self.a1) + &two * t) / &u3;
        let a4 = (rat(&self.a4) - s * rat(&self.a3) + &two * r * rat(&self.a2)
            - (t + r * s) * rat(&self.a1)
            + &three * r * r
            - &two * s * t)
            / &u4;
        let a6 = (rat(&self.a6) + r * rat(&self.a4) + r * r * rat(&self.a2) + r * r * r
            - t * rat(&self.a3)
            - t * t
            - r * t * rat(&self.a1))
            / &u6;
        let back = |x: BigRational| -> Result<BigInt, CurveError> {
            if x.is_integer() {
                Ok(x.to_integer())
            } else {
                Err(CurveError::NonIntegralModel)
            }
        };
        WeierstrassCurve::new(back(a1)?, back(a2)?, back(a3)?, back(a4)?, back(a6)?)
    }

    /// Global minimal model in reduced form (a1, a3 in {0,1}, a2 in {-1,0,1})
    /// together with the coordinate change that reaches it.
    ///
    /// The scaling primes are found by factoring the discriminant; callers
    /// that already know the bad primes should use
    /// [`WeierstrassCurve::minimal_model_with_primes`].
    pub fn minimal_model(&self) -> (WeierstrassCurve, CurveTransform) {
        let disc = self.discriminant().magnitude().clone();
        let f = arith::factor_unbounded(&disc);
        let primes: Vec<BigUint> = f.distinct_primes().cloned().collect();
        self.minimal_model_with_primes(&primes)
    }

    /// As [`minimal_model`], with the candidate scaling primes supplied.
    /// `primes` must contain every prime p with p^12 dividing the
    /// discriminant (2 and 3 are always considered).
    pub fn minimal_model_with_primes(
        &self,
        primes: &[BigUint],
    ) -> (WeierstrassCurve, CurveTransform) {
        let inv = self.invariants();
        let mut u = BigInt::one();
        let mut seen_small = [false, false];
        let mut candidates: Vec<BigInt> = Vec::new();
        for p in primes {
            let p = BigInt::from(p.clone());
            if p == BigInt::from(2) {
                seen_small[0] = true;
            }
            if p == BigInt::from(3) {
                seen_small[1] = true;
            }
            candidates.push(p);
        }
        if !seen_small[0] {
            candidates.push(BigInt::from(2));
        }
        if !seen_small[1] {
            candidates.push(BigInt::from(3));
        }
        for p in candidates {
            let mut e = scale_exponent(&inv.c4, &inv.c6, &inv.disc, &p);
            if p == BigInt::from(2) || p == BigInt::from(3) {
                while e > 0 {
                    let c4r = &inv.c4 / p.pow(4 * e);
                    let c6r = &inv.c6 / p.pow(6 * e);
                    if kraus_ok(&c4r, &c6r, &p) {
                        break;
                    }
                    e -= 1;
                }
            }
            u *= p.pow(e);
        }
        let c4m = &inv.c4 / u.pow(4);
        let c6m = &inv.c6 / u.pow(6);
        let minimal = curve_from_c4c6(&c4m, &c6m);

        // Recover (r, s, t) from the coefficient relations.
        let u_rat = BigRational::from_integer(u);
        let rat = |x: &BigInt| BigRational::from_integer(x.clone());
        let s = (&u_rat * rat(&minimal.a1) - rat(&self.a1)) / BigInt::from(2);
        let r = (&u_rat * &u_rat * rat(&minimal.a2) - rat(&self.a2)
            + &s * rat(&self.a1)
            + &s * &s)
            / BigInt::from(3);
        let t = (&u_rat * &u_rat * &u_rat * rat(&minimal.a3) - rat(&self.a3) - &r * rat(&self.a1))
            / BigInt::from(2);
        let tr = CurveTransform { u: u_rat, r, s, t };
        debug_assert_eq!(self.transformed(&tr).as_ref(), Ok(&minimal));
        (minimal, tr)
    }

    /// Isomorphism over Q, decided by comparing reduced minimal models.
    /// Returns the witness transform from `self` to `other` when isomorphic.
    pub fn is_isomorphic(&self, other: &WeierstrassCurve) -> Option<CurveTransform> {
        let (m1, t1) = self.minimal_model();
        let (m2, t2) = other.minimal_model();
        if m1 == m2 {
            Some(t1.then(&t2.inverse()))
        } else {
            None
        }
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{},{},{},{}]",
            self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

fn check_squarefree_twist(d: &BigInt) -> Result<(), CurveError> {
    if d.is_zero() {
        return Err(CurveError::BadTwist(d.clone()));
    }
    let f = arith::factor_unbounded(d.magnitude());
    if f.factors().iter().any(|(_, e)| *e > 1) {
        return Err(CurveError::BadTwist(d.clone()));
    }
    Ok(())
}

pub fn valuation(x: &BigInt, p: &BigInt) -> u32 {
    assert!(!x.is_zero());
    let mut v = 0;
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        x = q;
    }
}

/// Largest e with p^4e | c4, p^6e | c6 and p^12e | disc (zero counts as
/// infinitely divisible; c4 = c6 = 0 cannot happen on a nonsingular curve).
/// The discriminant cap matters at 2 and 3, where the 1728 in
/// 1728 disc = c4^3 - c6^2 absorbs part of the valuation.
fn scale_exponent(c4: &BigInt, c6: &BigInt, disc: &BigInt, p: &BigInt) -> u32 {
    let from_c = match (c4.is_zero(), c6.is_zero()) {
        (false, false) => (valuation(c4, p) / 4).min(valuation(c6, p) / 6),
        (true, false) => valuation(c6, p) / 6,
        (false, true) => valuation(c4, p) / 4,
        (true, true) => unreachable!("c4 = c6 = 0 implies a singular curve"),
    };
    from_c.min(valuation(disc, p) / 12)
}

/// Kraus' integrality conditions at 2 and 3 for a (c4, c6) pair.
fn kraus_ok(c4: &BigInt, c6: &BigInt, p: &BigInt) -> bool {
    if *p == BigInt::from(3) {
        c6.is_zero() || valuation(c6, p) != 2
    } else if *p == BigInt::from(2) {
        if c6.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
            return true;
        }
        let c4_ok = c4.is_zero() || valuation(c4, p) >= 4;
        let r32 = c6.mod_floor(&BigInt::from(32));
        c4_ok && (r32.is_zero() || r32 == BigInt::from(8))
    } else {
        true
    }
}

/// Reduced model from minimal (c4, c6): b2 is the residue of -c6 mod 12 in
/// [-5, 6], then the a-invariants are read off with a1, a3 in {0,1} and
/// a2 in {-1,0,1}. Valid whenever Kraus' conditions hold.
fn curve_from_c4c6(c4: &BigInt, c6: &BigInt) -> WeierstrassCurve {
    let twelve = BigInt::from(12);
    let mut b2 = (-c6).mod_floor(&twelve);
    if b2 > BigInt::from(6) {
        b2 -= twelve;
    }
    let b4 = (&b2 * &b2 - c4) / BigInt::from(24);
    let b6 = (-(&b2 * &b2 * &b2) + BigInt::from(36) * &b2 * &b4 - c6) / BigInt::from(216);
    let a1 = b2.mod_floor(&BigInt::from(2));
    let a2 = (&b2 - &a1) / BigInt::from(4);
    let a3 = b6.mod_floor(&BigInt::from(2));
    let a4 = (&b4 - &a1 * &a3) / BigInt::from(2);
    let a6 = (&b6 - &a3) / BigInt::from(4);
    let e = WeierstrassCurve { a1, a2, a3, a4, a6 };
    debug_assert_eq!(&e.invariants().c4, c4);
    debug_assert_eq!(&e.invariants().c6, c6);
    e
}
