//! Fast exact enumeration of resonant triads.
//!
//! The solver never searches over m. For a fixed n-triple with
//! `n1 < n3 < n2` the resonance condition pins the ratio
//!
//!   m2/m1 = (β(n3) − β(n1))/(β(n2) − β(n3)) · β(n2)/β(n1) = R_N/R_D
//!
//! with `gcd(R_N, R_D) = 1` after cross-reduction, so every solution for
//! that triple is `(m1, m2, m3) = (k·R_D, k·R_N, k·(R_N + R_D))` for
//! `k = 1..kmax`. Bounds on the cross-reduced factors are checked before
//! any product is formed, which keeps every intermediate at or below
//! `(D+1)²` for the built-in laws.

use crate::dispersion::{BetaTable, DispersionSpec, Triad, WaveVector};
use crate::error::Error;
use crate::exactmath::cross_reduce_with;

/// The complete m-family of one n-triple: `(m1, m2, m3) = (k·rd, k·rn,
/// k·(rn + rd))` for `k = 1..=kmax`, with `gcd(rn, rd) = 1` and `kmax ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MFamily {
    pub rn: u64,
    pub rd: u64,
    pub kmax: u64,
}

impl MFamily {
    /// The family members `(m1, m2, m3)` in ascending k order.
    pub fn members(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        (1..=self.kmax).map(|k| (k * self.rd, k * self.rn, k * (self.rn + self.rd)))
    }
}

/// Largest m allowed for a mode with meridional wavenumber `n`: the domain
/// bound, tightened to `n` when the spec requires m ≤ n.
fn m_cap(spec: &DispersionSpec, domain: u32, n: u32) -> u64 {
    if spec.require_m_le_n {
        n as u64
    } else {
        domain as u64
    }
}

/// Solves one n-triple in closed form. `None` when the triple has no
/// admissible m at all, which is the common case.
///
/// Requires `n1 < n3 < n2 ≤ table.domain()`; the enumeration loop
/// guarantees this.
pub fn solve_n_triple(
    spec: &DispersionSpec,
    table: &BetaTable,
    n1: u32,
    n2: u32,
    n3: u32,
) -> Option<MFamily> {
    solve_n_triple_with(spec, table, n1, n2, n3, |_| {})
}

/// [`solve_n_triple`] with an instrumentation hook: `probe` observes every
/// integer the solver materializes, in order. Tests use it to pin the
/// bound that nothing in the fast path exceeds (D+1)² for the built-in
/// laws.
pub fn solve_n_triple_with(
    spec: &DispersionSpec,
    table: &BetaTable,
    n1: u32,
    n2: u32,
    n3: u32,
    mut probe: impl FnMut(u64),
) -> Option<MFamily> {
    debug_assert!(n1 < n3 && n3 < n2 && n2 <= table.domain());
    let b1 = table.get(n1);
    let b2 = table.get(n2);
    let b3 = table.get(n3);
    // β strictly increasing makes both differences positive.
    let r31 = b3 - b1;
    let r23 = b2 - b3;
    probe(r31);
    probe(r23);
    probe(b2);
    probe(b1);

    // m2/m1 = (r31/r23)·(b2/b1), cross-reduced to lowest terms without
    // forming either product.
    let cr = cross_reduce_with(r31, r23, b2, b1, &mut probe);
    let rr31 = cr.f1.num();
    let rr23 = cr.f1.den();
    let rr2 = cr.f2.num();
    let rr1 = cr.f2.den();

    let cap1 = m_cap(spec, table.domain(), n1);
    let cap2 = m_cap(spec, table.domain(), n2);
    let cap3 = m_cap(spec, table.domain(), n3);

    // Factor bounds come before the multiplications: if a single factor
    // already exceeds its cap the family is empty, and skipping the
    // product keeps the no-overflow argument local.
    if rr23 > cap1 || rr1 > cap1 || rr31 > cap2 || rr2 > cap2 {
        return None;
    }
    let rd = rr23 * rr1;
    probe(rd);
    if rd > cap1 {
        return None;
    }
    let rn = rr31 * rr2;
    probe(rn);
    if rn > cap2 {
        return None;
    }
    debug_assert_eq!(crate::exactmath::gcd(rn, rd), 1);
    let sum = rn + rd;
    probe(sum);
    let kmax = (cap1 / rd).min(cap2 / rn).min(cap3 / sum);
    probe(kmax);
    if kmax == 0 {
        return None;
    }
    let family = MFamily { rn, rd, kmax };
    if cfg!(debug_assertions) {
        for (m1, m2, m3) in family.members() {
            probe(m1);
            probe(m2);
            probe(m3);
        }
    }
    Some(family)
}

/// All triads of one dispersion spec in the domain `[1, D]`, in canonical
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub spec: DispersionSpec,
    pub domain: u32,
    pub triads: Vec<Triad>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.triads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triads.is_empty()
    }

    pub fn contains(&self, t: &Triad) -> bool {
        self.triads.binary_search(t).is_ok()
    }
}

/// Inclusive n3 range for a fixed `n1 < n2`, before parity stepping.
///
/// n3 strictly between n1 and n2 is forced by positivity of the two β
/// differences, not by any flag. The triangle flag can only raise the
/// lower end: |n1 − n2| ≤ n3 keeps n3 ≥ n2 − n1 (the other triangle side
/// holds automatically for n3 < n2). The bound is inclusive; when the
/// parity flag is also on the boundary value drops out anyway because
/// n1 + n2 + (n2 − n1) is even.
fn n3_range(spec: &DispersionSpec, n1: u32, n2: u32) -> (u32, u32) {
    let mut lo = n1 + 1;
    if spec.require_triangle {
        lo = lo.max(n2 - n1);
    }
    (lo, n2 - 1)
}

fn scan_n1(
    spec: &DispersionSpec,
    table: &BetaTable,
    n1: u32,
    out: &mut Vec<Triad>,
) {
    let domain = table.domain();
    for n2 in n1 + 1..=domain {
        let (mut lo, hi) = n3_range(spec, n1, n2);
        let step = if spec.require_odd_sum {
            // Start parity chosen so n1 + n2 + n3 is odd.
            if (n1 + n2 + lo) % 2 == 0 {
                lo += 1;
            }
            2
        } else {
            1
        };
        let mut n3 = lo;
        while n3 <= hi {
            if let Some(family) = solve_n_triple(spec, table, n1, n2, n3) {
                for (m1, m2, m3) in family.members() {
                    let t = Triad::new(
                        WaveVector::new(m1 as u32, n1),
                        WaveVector::new(m2 as u32, n2),
                        WaveVector::new(m3 as u32, n3),
                    );
                    debug_assert!(spec.admissible(t.k1(), t.k2(), t.k3()));
                    debug_assert!(spec.omega_compare(t.k1(), t.k2(), t.k3()));
                    out.push(t);
                }
            }
            n3 += step;
        }
    }
}

/// Enumerates every triad in `[1, D]`. `jobs` is the worker count; any
/// count produces byte-identical results because workers take disjoint n1
/// stripes into private buffers and the merged result is sorted.
///
/// Triples with all three n equal are self-interactions of a single β
/// value and are trivially resonant for any m1, m2 when distinctness is
/// not required; they are a degenerate family, not counted as triads
/// here or in the brute-force reference. No other repeated-n solutions
/// exist for strictly increasing β: two equal denominators force all
/// three equal.
pub fn enumerate(spec: &DispersionSpec, domain: u32, jobs: usize) -> Result<SolutionSet, Error> {
    let table = BetaTable::build(spec, domain)?;
    let jobs = jobs.max(1).min(domain.max(1) as usize);
    let mut triads = if jobs == 1 {
        let mut out = Vec::new();
        for n1 in 1..=domain {
            scan_n1(spec, &table, n1, &mut out);
        }
        out
    } else {
        let mut buffers: Vec<Vec<Triad>> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|w| {
                    let table = &table;
                    scope.spawn(move || {
                        let mut out = Vec::new();
                        let mut n1 = w as u32 + 1;
                        while n1 <= domain {
                            scan_n1(spec, table, n1, &mut out);
                            n1 += jobs as u32;
                        }
                        out
                    })
                })
                .collect();
            for h in handles {
                buffers.push(h.join().expect("enumeration worker panicked"));
            }
        });
        buffers.into_iter().flatten().collect()
    };
    triads.sort();
    debug_assert!(triads.windows(2).all(|w| w[0] < w[1]), "duplicate triads");
    Ok(SolutionSet {
        spec: spec.clone(),
        domain,
        triads,
    })
}
