//! Fixture candidate generator: scans coefficient boxes for curves of
//! conductor <= 1000, closes the set under rational-torsion isogenies, and
//! prints one minimal model (with its torsion order) per line. The stored
//! conductor/Tamagawa values of the committed fixture are computed
//! separately by tools/make_fixture.py so the shipped expectations do not
//! come from the code under test.

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use std::collections::BTreeSet;
use tamagawa::curve::WeierstrassCurve;
use tamagawa::isogeny;
use tamagawa::reduction;
use tamagawa::Factorization;

const N_MAX: u64 = 1000;

fn primes_to(n: u64) -> Vec<u64> {
    let mut sieve = vec![true; (n + 1) as usize];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i as usize] {
            out.push(i);
            let mut j = i * i;
            while j <= n {
                sieve[j as usize] = false;
                j += i;
            }
        }
    }
    out
}

fn val_u64(mut m: u64, p: u64) -> u32 {
    let mut v = 0;
    while m != 0 && m % p == 0 {
        m /= p;
        v += 1;
    }
    v
}

/// Factor |d| if all its primes are <= N_MAX, else None. The boxes keep
/// every quantity below 2^63 so plain u64 arithmetic suffices.
fn smooth_factor(d: i128, primes: &[u64]) -> Option<Vec<(u64, u32)>> {
    let mut m = u64::try_from(d.unsigned_abs()).expect("discriminant fits u64");
    if m == 0 {
        return None;
    }
    let mut out = Vec::new();
    for &p in primes {
        if m == 1 || p > m {
            break;
        }
        if m % p == 0 {
            let mut v = 0;
            while m % p == 0 {
                m /= p;
                v += 1;
            }
            out.push((p, v));
        }
    }
    (m == 1).then_some(out)
}

/// Conservative lower bound for the conductor, from u64 data only: the scale
/// exponent ignores the Kraus adjustment at 2 and 3, which can only make the
/// bound smaller, never larger. Candidates above N_MAX are safe to drop.
fn conductor_lower_bound(fs: &[(u64, u32)], c4: i128, c6: i128) -> u64 {
    let mut n: u64 = 1;
    for &(p, vd) in fs {
        let vc4 = if c4 == 0 {
            u32::MAX
        } else {
            val_u64(c4.unsigned_abs() as u64, p)
        };
        let vc6 = if c6 == 0 {
            u32::MAX
        } else {
            val_u64(c6.unsigned_abs() as u64, p)
        };
        let e = (vc4 / 4).min(vc6 / 6).min(vd / 12);
        let vd_min = vd - 12 * e;
        if vd_min == 0 {
            continue;
        }
        n = n.saturating_mul(p);
        if vc4.saturating_sub(4 * e) > 0 {
            // additive reduction: conductor exponent at least 2
            n = n.saturating_mul(p);
        }
    }
    n
}

fn scan_box(a4_max: i64, a6_max: i64, primes: &[u64]) -> BTreeSet<WeierstrassCurve> {
    (-a4_max..=a4_max)
        .into_par_iter()
        .map(|a4| {
            let mut local = BTreeSet::new();
            for a1 in 0..=1i64 {
                for a2 in -1..=1i64 {
                    for a3 in 0..=1i64 {
                        let b2 = a1 * a1 + 4 * a2;
                        let b4 = 2 * a4 + a1 * a3;
                        let c4 = (b2 * b2) as i128 - 24 * b4 as i128;
                        for a6 in -a6_max..=a6_max {
                            let b6 = (a3 * a3) as i128 + 4 * a6 as i128;
                            let b8 = (a1 * a1) as i128 * a6 as i128
                                + 4 * a2 as i128 * a6 as i128
                                - (a1 * a3 * a4) as i128
                                + (a2 * a3 * a3) as i128
                                - (a4 as i128 * a4 as i128);
                            let disc = -(b2 as i128 * b2 as i128) * b8
                                - 8 * (b4 as i128).pow(3)
                                - 27 * b6 * b6
                                + 9 * b2 as i128 * b4 as i128 * b6;
                            if disc == 0 {
                                continue;
                            }
                            let Some(fs) = smooth_factor(disc, primes) else {
                                continue;
                            };
                            let c6 = -(b2 as i128).pow(3) + 36 * (b2 * b4) as i128
                                - 216 * b6;
                            if conductor_lower_bound(&fs, c4, c6) > N_MAX {
                                continue;
                            }
                            let e = WeierstrassCurve::from_i64([a1, a2, a3, a4, a6]).unwrap();
                            let pvec: Vec<BigUint> =
                                fs.iter().map(|(p, _)| BigUint::from(*p)).collect();
                            let (m, _) = e.minimal_model_with_primes(&pvec);
                            if local.contains(&m) {
                                continue;
                            }
                            let pairs: Vec<(BigUint, u32)> = fs
                                .iter()
                                .map(|(p, v)| (BigUint::from(*p), *v))
                                .collect();
                            let f = Factorization::from_known_factors(
                                BigInt::from(disc).magnitude().clone(),
                                &pairs,
                            )
                            .unwrap();
                            let g = reduction::global_data(&e, &f).unwrap();
                            if g.conductor <= BigUint::from(N_MAX) {
                                local.insert(m);
                            }
                        }
                    }
                }
            }
            local
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

fn main() {
    let primes = primes_to(N_MAX);
    let mut found: BTreeSet<WeierstrassCurve> = BTreeSet::new();
    let boxes: [(i64, i64); 4] = [(200, 10_000), (1_000, 30_000), (5_000, 5_000), (30, 150_000)];
    for (a4_max, a6_max) in boxes {
        found.extend(scan_box(a4_max, a6_max, &primes));
        eprintln!("after box ({a4_max}, {a6_max}): {} curves", found.len());
    }

    // close under rational-torsion isogenies until nothing new appears: the
    // conductor is invariant, so everything reached stays in range,
    // including big-coefficient curves the box scan cannot see
    let mut frontier: Vec<WeierstrassCurve> = found.iter().cloned().collect();
    while !frontier.is_empty() {
        let reached: Vec<BTreeSet<WeierstrassCurve>> = frontier
            .par_iter()
            .map(|e| {
                isogeny::enumerate_isogenous(e, 3)
                    .unwrap()
                    .into_iter()
                    .collect::<BTreeSet<_>>()
            })
            .collect();
        frontier = Vec::new();
        for set in reached {
            for c in set {
                if found.insert(c.clone()) {
                    frontier.push(c);
                }
            }
        }
        eprintln!("isogeny closure pass: {} curves", found.len());
    }

    for c in &found {
        let torsion = isogeny::torsion_points(c).points.len();
        println!("{c} {torsion}");
    }
}
