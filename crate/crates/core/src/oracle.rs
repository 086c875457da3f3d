//! Brute-force reference enumerator.
//!
//! Exists only to validate the fast path at small domains, so it shares no
//! arithmetic with it: β is evaluated by its own code, the constraints are
//! re-stated inline rather than calling [`DispersionSpec::admissible`], and
//! the resonance identity is checked directly in 128-bit integers over the
//! full (m1, m2) rectangle. Runtime grows like D⁵.

use std::collections::BTreeSet;

use crate::dispersion::{DispersionSpec, BetaLaw, Triad, WaveVector};
use crate::enumerator::SolutionSet;
use crate::error::Error;

/// Largest domain the oracle accepts by default; beyond this the D⁵ loop
/// stops being a convenience.
pub const ORACLE_CAP: u32 = 100;

pub fn brute_enumerate(spec: &DispersionSpec, domain: u32) -> Result<SolutionSet, Error> {
    brute_enumerate_with_cap(spec, domain, ORACLE_CAP)
}

/// [`brute_enumerate`] with an explicit cap, for tests that want a tighter
/// or looser leash.
pub fn brute_enumerate_with_cap(
    spec: &DispersionSpec,
    domain: u32,
    cap: u32,
) -> Result<SolutionSet, Error> {
    if domain > cap {
        return Err(Error::OracleCap {
            requested: domain,
            cap,
        });
    }
    let beta = reference_beta_table(spec, domain)?;
    let b = |n: u32| beta[n as usize - 1];
    let d = domain as u64;

    let mut found: BTreeSet<Triad> = BTreeSet::new();
    for n1 in 1..=domain {
        for n2 in n1 + 1..=domain {
            for n3 in 1..=domain {
                // Literal constraint filtering, restated from scratch.
                if spec.require_distinct_n && (n3 == n1 || n3 == n2) {
                    continue;
                }
                if spec.require_triangle {
                    let (lo, hi) = (n2 - n1, n1 as u64 + n2 as u64);
                    if (n3 as u64) < lo as u64 || (n3 as u64) > hi {
                        continue;
                    }
                }
                if spec.require_odd_sum && (n1 as u64 + n2 as u64 + n3 as u64) % 2 == 0 {
                    continue;
                }
                let (b1, b2, b3) = (b(n1), b(n2), b(n3));
                let cap1 = if spec.require_m_le_n { n1 as u64 } else { d };
                let cap2 = if spec.require_m_le_n { n2 as u64 } else { d };
                let cap3 = if spec.require_m_le_n { n3 as u64 } else { d };
                let rhs_unit = b1 as u128 * b2 as u128;
                for m1 in 1..=cap1 {
                    let t1 = m1 as u128 * b2 as u128 * b3 as u128;
                    for m2 in 1..=cap2 {
                        let m3 = m1 + m2;
                        // m3 grows with m2, so the first violation ends the row.
                        if m3 > cap3 {
                            break;
                        }
                        let lhs = t1 + m2 as u128 * b1 as u128 * b3 as u128;
                        if lhs == m3 as u128 * rhs_unit {
                            found.insert(Triad::new(
                                WaveVector::new(m1 as u32, n1),
                                WaveVector::new(m2 as u32, n2),
                                WaveVector::new(m3 as u32, n3),
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(SolutionSet {
        spec: spec.clone(),
        domain,
        triads: found.into_iter().collect(),
    })
}

/// β on [1, D] evaluated by the oracle's own arithmetic: direct formulas
/// for the built-ins and a plain power sum (no Horner) for polynomials.
/// Also re-derives the capacity requirement: every identity term is
/// m·β·β ≤ D·β(D)², and twice that must fit u128.
fn reference_beta_table(spec: &DispersionSpec, domain: u32) -> Result<Vec<u64>, Error> {
    let mut values = Vec::with_capacity(domain as usize);
    for n in 1..=domain {
        let nn = n as i128;
        let v: i128 = match &spec.beta {
            BetaLaw::Sphere => nn * nn + nn,
            BetaLaw::Channel => nn * nn + 1,
            BetaLaw::Poly(coeffs) => {
                let mut total: i128 = 0;
                for (i, &c) in coeffs.iter().enumerate() {
                    let mut power: i128 = 1;
                    for _ in 0..i {
                        power = power.checked_mul(nn).ok_or_else(|| Error::Capacity {
                            domain,
                            reason: format!("reference beta({n}) overflows"),
                        })?;
                    }
                    total = total.checked_add(c as i128 * power).ok_or_else(|| {
                        Error::Capacity {
                            domain,
                            reason: format!("reference beta({n}) overflows"),
                        }
                    })?;
                }
                total
            }
        };
        if v < 1 || v > u64::MAX as i128 {
            return Err(Error::Capacity {
                domain,
                reason: format!("reference beta({n}) = {v} is outside [1, 2^64)"),
            });
        }
        if let Some(&prev) = values.last() {
            if v as u64 <= prev {
                return Err(Error::InvalidSpec(format!(
                    "beta must be strictly increasing; violated at n = {n}"
                )));
            }
        }
        values.push(v as u64);
    }
    if let Some(&top) = values.last() {
        (top as u128)
            .checked_mul(top as u128)
            .and_then(|sq| sq.checked_mul(2 * domain as u128))
            .ok_or_else(|| Error::Capacity {
                domain,
                reason: "identity terms would overflow 128-bit arithmetic".into(),
            })?;
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerator::enumerate;

    fn wv(m: u32, n: u32) -> WaveVector {
        WaveVector::new(m, n)
    }

    #[test]
    fn finds_hand_verified_triad() {
        let set = brute_enumerate(&DispersionSpec::sphere(), 14).unwrap();
        let t = Triad::new(wv(4, 12), wv(5, 14), wv(9, 13));
        assert!(set.contains(&t));
    }

    #[test]
    fn family_for_one_n_triple_matches_closed_form() {
        // Within D = 14 the n-triple (12, 14, 13) carries exactly the k = 1
        // member of the 5/4 family.
        let set = brute_enumerate(&DispersionSpec::sphere(), 14).unwrap();
        let members: Vec<_> = set
            .triads
            .iter()
            .filter(|t| t.k1().n == 12 && t.k2().n == 14 && t.k3().n == 13)
            .collect();
        assert_eq!(members.len(), 1);
        assert_eq!(members[0].k1(), wv(4, 12));
        assert_eq!(members[0].k2(), wv(5, 14));
        assert_eq!(members[0].k3(), wv(9, 13));
    }

    #[test]
    fn tiny_domains_are_empty() {
        for spec in [DispersionSpec::sphere(), DispersionSpec::channel()] {
            assert!(brute_enumerate(&spec, 2).unwrap().is_empty());
        }
    }

    #[test]
    fn cap_is_enforced() {
        match brute_enumerate(&DispersionSpec::sphere(), 101) {
            Err(Error::OracleCap { requested, cap }) => {
                assert_eq!((requested, cap), (101, ORACLE_CAP));
            }
            other => panic!("expected cap refusal, got {other:?}"),
        }
        assert!(brute_enumerate_with_cap(&DispersionSpec::sphere(), 21, 20).is_err());
    }

    #[test]
    fn agrees_with_fast_path_on_presets() {
        for spec in [DispersionSpec::sphere(), DispersionSpec::channel()] {
            for d in [10, 30, 50] {
                let slow = brute_enumerate(&spec, d).unwrap();
                let fast = enumerate(&spec, d, 1).unwrap();
                assert_eq!(slow.triads, fast.triads, "{} at D = {d}", spec.name);
            }
        }
    }

    #[test]
    fn agrees_with_fast_path_on_sphere_counts() {
        let slow = brute_enumerate(&DispersionSpec::sphere(), 50).unwrap();
        assert_eq!(slow.len(), 42);
    }

    #[test]
    fn no_solution_has_n3_outside_the_open_interval() {
        for spec in [DispersionSpec::sphere(), DispersionSpec::channel()] {
            let set = brute_enumerate(&spec, 50).unwrap();
            for t in &set.triads {
                let (n1, n2, n3) = (t.k1().n, t.k2().n, t.k3().n);
                assert!(n1.min(n2) < n3 && n3 < n1.max(n2), "{t}");
            }
        }
    }

    #[test]
    fn agrees_with_fast_path_on_custom_specs() {
        // β(n) = n with the triangle flag on exercises the n3 = n2 - n1
        // boundary; the unconstrained quadratic exercises m caps of D.
        let linear = DispersionSpec {
            name: "linear".into(),
            beta: BetaLaw::Poly(vec![0, 1]),
            require_m_le_n: true,
            require_distinct_n: true,
            require_triangle: true,
            require_odd_sum: false,
        };
        let unconstrained = DispersionSpec {
            name: "sphere-law-no-flags".into(),
            beta: BetaLaw::Poly(vec![0, 1, 1]),
            require_m_le_n: false,
            require_distinct_n: false,
            require_triangle: false,
            require_odd_sum: false,
        };
        for (spec, d) in [(&linear, 16), (&unconstrained, 12)] {
            let slow = brute_enumerate(spec, d).unwrap();
            let fast = enumerate(spec, d, 1).unwrap();
            assert_eq!(slow.triads, fast.triads, "{}", spec.name);
            assert!(!slow.is_empty(), "{} should have solutions", spec.name);
        }
    }
}
