//! Primality testing, budgeted integer factorisation and radicals.
//!
//! Everything downstream (radicals, discriminants, bad primes) rests on this
//! module. Factoring is strictly deterministic: trial division by a fixed
//! sieve, then Brent-cycle Pollard rho with fixed polynomial constants, all
//! metered by a step budget so that runs are reproducible across machines.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::sync::OnceLock;
use thiserror::Error;

/// Upper bound (exclusive) of the trial-division sieve.
const TRIAL_BOUND: u64 = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("factorization of {0} is incomplete (unresolved cofactor {1})")]
    IncompleteFactorization(BigUint, BigUint),
    #[error("claimed factorization of {0} does not multiply back to it")]
    ProductMismatch(BigUint),
    #[error("claimed factor {0} is not prime")]
    CompositeFactor(BigUint),
}

/// Deterministic step meter shared by one unit of work.
///
/// A step is one trial division, one rho iteration, one Tate sub-loop pass or
/// one isogeny node, so identical inputs always exhaust at the same point.
#[derive(Debug, Clone)]
pub struct StepBudget {
    remaining: Option<u64>,
}

impl StepBudget {
    pub fn limited(steps: u64) -> Self {
        StepBudget {
            remaining: Some(steps),
        }
    }

    pub fn unlimited() -> Self {
        StepBudget { remaining: None }
    }

    /// Consume `cost` steps; returns false once the budget is gone.
    pub fn charge(&mut self, cost: u64) -> bool {
        match &mut self.remaining {
            None => true,
            Some(left) => {
                if *left >= cost {
                    *left -= cost;
                    true
                } else {
                    *left = 0;
                    false
                }
            }
        }
    }

    pub fn exhausted(&self) -> bool {
        self.remaining == Some(0)
    }
}

/// Prime decomposition of a positive integer.
///
/// `factors` lists certified primes with their exponents in increasing order.
/// When the step budget ran out first, the unresolved composite part is kept
/// in `cofactor` and the factorization is flagged incomplete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: BigUint,
    factors: Vec<(BigUint, u32)>,
    cofactor: Option<BigUint>,
}

impl Factorization {
    pub fn value(&self) -> &BigUint {
        &self.n
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn cofactor(&self) -> Option<&BigUint> {
        self.cofactor.as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }

    /// Primes p with p^k || n for odd k would still appear here once: the set
    /// of distinct primes, each taken to the first power.
    pub fn distinct_primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn valuation(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// Multiply the listed factors (and cofactor) back together.
    pub fn reassemble(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        if let Some(c) = &self.cofactor {
            acc *= c;
        }
        acc
    }

    /// Trusted-input path: verify that the claimed prime powers multiply back
    /// to `n` and that each claimed prime really is prime, then adopt them.
    pub fn from_known_factors(
        n: BigUint,
        claimed: &[(BigUint, u32)],
    ) -> Result<Factorization, ArithError> {
        let mut factors: Vec<(BigUint, u32)> = claimed.to_vec();
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut acc = BigUint::one();
        for (p, e) in &factors {
            if !is_prime(p) {
                return Err(ArithError::CompositeFactor(p.clone()));
            }
            acc *= p.pow(*e);
        }
        if acc != n {
            return Err(ArithError::ProductMismatch(n));
        }
        Ok(Factorization {
            n,
            factors,
            cofactor: None,
        })
    }

    /// Scale the exponent of every factor, e.g. squaring a factored value.
    pub fn pow(&self, k: u32) -> Factorization {
        Factorization {
            n: self.n.pow(k),
            factors: self
                .factors
                .iter()
                .map(|(p, e)| (p.clone(), e * k))
                .collect(),
            cofactor: self.cofactor.as_ref().map(|c| c.pow(k)),
        }
    }

    /// Product of two factored values (cofactors multiply).
    pub fn merged(&self, other: &Factorization) -> Factorization {
        let mut map: BTreeMap<BigUint, u32> = BTreeMap::new();
        for (p, e) in self.factors.iter().chain(other.factors.iter()) {
            *map.entry(p.clone()).or_insert(0) += e;
        }
        let cofactor = match (&self.cofactor, &other.cofactor) {
            (None, None) => None,
            (Some(c), None) | (None, Some(c)) => Some(c.clone()),
            (Some(c), Some(d)) => Some(c * d),
        };
        Factorization {
            n: &self.n * &other.n,
            factors: map.into_iter().collect(),
            cofactor,
        }
    }

    /// Render as `2^10*3^4` (or `1` for the empty product).
    pub fn render(&self) -> String {
        if self.factors.is_empty() && self.cofactor.is_none() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        if let Some(c) = &self.cofactor {
            parts.push(format!("({c})"));
        }
        parts.join("*")
    }
}

fn small_primes() -> &'static [u64] {
    static SIEVE: OnceLock<Vec<u64>> = OnceLock::new();
    SIEVE.get_or_init(|| {
        let bound = TRIAL_BOUND as usize;
        let mut composite = vec![false; bound];
        let mut primes = Vec::with_capacity(1300);
        for i in 2..bound {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j < bound {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin below 2^64: this witness set has no exceptions.
const MR_WITNESSES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &a in &MR_WITNESSES_64 {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn strong_mr_round(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = base.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

fn jacobi(a: &num_bigint::BigInt, n: &BigUint) -> i32 {
    use num_bigint::BigInt;
    let mut a = a.mod_floor(&BigInt::from(n.clone()));
    let mut n = n.clone();
    let mut result = 1i32;
    while !a.is_zero() {
        let mut a_mag = a.magnitude().clone();
        while a_mag.is_even() {
            a_mag >>= 1;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a_mag, &mut n);
        if (&a_mag % 4u32).to_u32().unwrap() == 3 && (&n % 4u32).to_u32().unwrap() == 3 {
            result = -result;
        }
        a = BigInt::from(a_mag % &n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice.
fn strong_lucas(n: &BigUint) -> bool {
    use num_bigint::BigInt;
    // Find D in 5, -7, 9, -11, ... with (D|n) = -1.
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 => {
                // Shares a factor with n unless |D| == n itself.
                return BigInt::from(n.clone()) == d.clone().abs();
            }
            _ => {}
        }
        d = if d.sign() == num_bigint::Sign::Plus {
            -(d + BigInt::from(2))
        } else {
            -(d - BigInt::from(2))
        };
    }
    let n_int = BigInt::from(n.clone());
    let q: BigInt = (BigInt::one() - &d) / 4;
    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    // Binary ladder for U_k, V_k (P = 1).
    let modn = |x: BigInt| x.mod_floor(&n_int);
    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = q.clone();
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        // double: (U, V)_{2m}
        u = modn(&u * &v);
        v = modn(&v * &v - 2 * &qk);
        qk = modn(&qk * &qk);
        if k.bit(i) {
            // add one: (U, V)_{2m+1}
            let u_new = &u + &v;
            let v_new = &d * &u + &v;
            // division by 2 mod n (n is odd here)
            let half = |x: BigInt| {
                let x = modn(x);
                if x.is_even() {
                    x / 2
                } else {
                    (x + &n_int) / 2
                }
            };
            u = half(u_new);
            v = half(v_new);
            qk = modn(&qk * &q);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = modn(&v * &v - 2 * &qk);
        if v.is_zero() {
            return true;
        }
        qk = modn(&qk * &qk);
    }
    false
}

/// Primality test: deterministic Miller-Rabin below 2^64, a Baillie-PSW style
/// combination (strong base-2 Miller-Rabin plus strong Lucas) above it.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in small_primes().iter().take(100) {
        if (n % p).is_zero() {
            return false;
        }
    }
    // Perfect squares would defeat the Lucas parameter search.
    let r = n.sqrt();
    if &(&r * &r) == n {
        return false;
    }
    strong_mr_round(n, &BigUint::from(2u32)) && strong_lucas(n)
}

/// Brent-cycle Pollard rho; returns a nontrivial factor or None when the
/// budget ran out. `n` must be odd, composite and not a prime power for the
/// result to be guaranteed, but any nontrivial split is accepted.
fn rho_brent(n: &BigUint, budget: &mut StepBudget) -> Option<BigUint> {

    for c in 1u64..=8 {
        let cbig = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &cbig) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut q = BigUint::one();
        let mut r: u64 = 1;
        let mut g = BigUint::one();
        let mut ys = y.clone();
        'outer: while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k: u64 = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = 128.min(r - k);
                for _ in 0..m {
                    if !budget.charge(1) {
                        break 'outer;
                    }
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (&q * &diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            // Backtrack one step at a time.
            loop {
                if !budget.charge(1) {
                    return None;
                }
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
        if budget.exhausted() {
            return None;
        }
        // cycle collapsed for this polynomial; try the next c
    }
    None
}

/// Factor a positive integer within the given step budget.
///
/// Strategy: trial division by every sieve prime below 10^4, then Pollard rho
/// with Brent cycle detection on the remaining composite cofactors, recursing
/// on each split. Running out of budget is not an error: the unresolved part
/// is returned as the flagged cofactor.
pub fn factor(n: &BigUint, budget: &mut StepBudget) -> Factorization {
    let mut map: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut stuck: Option<BigUint> = None;
    if n.is_zero() {
        panic!("factor() requires a positive integer");
    }
    let mut m = n.clone();
    for &p in small_primes() {
        if m.is_one() {
            break;
        }
        if !budget.charge(1) {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        while (&m % &pb).is_zero() {
            m /= &pb;
            *map.entry(pb.clone()).or_insert(0) += 1;
        }
    }
    let mut pending = vec![m];
    while let Some(m) = pending.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            *map.entry(m).or_insert(0) += 1;
            continue;
        }
        // Perfect powers trip up nothing here but are cheap to peel.
        if let Some((root, k)) = perfect_power(&m) {
            for _ in 0..k {
                pending.push(root.clone());
            }
            continue;
        }
        if budget.exhausted() {
            stuck = Some(match stuck.take() {
                None => m,
                Some(s) => s * m,
            });
            continue;
        }
        match rho_brent(&m, budget) {
            Some(g) => {
                pending.push(&m / &g);
                pending.push(g);
            }
            None => {
                stuck = Some(match stuck.take() {
                    None => m,
                    Some(s) => s * m,
                });
            }
        }
    }
    Factorization {
        n: n.clone(),
        factors: map.into_iter().collect(),
        cofactor: stuck,
    }
}

fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits();
    for k in (2..=bits.max(2)).rev() {
        let k = k as u32;
        let root = n.nth_root(k);
        if root.is_one() {
            continue;
        }
        if root.pow(k) == *n {
            return Some((root, k));
        }
    }
    None
}

/// Convenience: factor with no budget cap.
pub fn factor_unbounded(n: &BigUint) -> Factorization {
    factor(n, &mut StepBudget::unlimited())
}

/// Product of the distinct primes across all inputs, each taken once.
/// Incomplete inputs are rejected: a hidden prime would corrupt the radical.
pub fn radical(fs: &[&Factorization]) -> Result<BigUint, ArithError> {
    let mut primes: std::collections::BTreeSet<&BigUint> = std::collections::BTreeSet::new();
    for f in fs {
        if let Some(c) = f.cofactor() {
            return Err(ArithError::IncompleteFactorization(
                f.value().clone(),
                c.clone(),
            ));
        }
        primes.extend(f.distinct_primes());
    }
    Ok(primes.into_iter().product())
}
