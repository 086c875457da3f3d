//! Rational dispersion laws `ω = m/β(n)` and the constraint sets that make
//! an integer triple a candidate resonance.
//!
//! Two laws are built in: `sphere` with `β(n) = n(n+1)` (planetary waves on
//! a rotating sphere) and `channel` with `β(n) = n² + 1` (drift waves in an
//! infinite channel). Custom laws are integer-coefficient polynomials that
//! must be positive and strictly increasing on the working domain. The
//! physical sign and constant factor in ω cancel from the resonance
//! condition `ω1 + ω2 = ω3`, so everything here works with the normalized
//! form `m/β(n)`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// A wave mode on the integer lattice: zonal wavenumber `m`, meridional
/// wavenumber `n`, both strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WaveVector {
    pub m: u32,
    pub n: u32,
}

impl WaveVector {
    pub fn new(m: u32, n: u32) -> Self {
        debug_assert!(m >= 1 && n >= 1);
        WaveVector { m, n }
    }

    /// Ordering key: `(n, m)` lexicographic. This is the order that decides
    /// which of a triad's interchangeable pair comes first.
    pub fn key(&self) -> (u32, u32) {
        (self.n, self.m)
    }
}

impl PartialOrd for WaveVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WaveVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl std::fmt::Display for WaveVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

/// The denominator law β. Built-ins are kept symbolic so they serialize as
/// readable formulas; custom laws are polynomial coefficient lists in
/// ascending powers of n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BetaLaw {
    /// β(n) = n(n+1)
    Sphere,
    /// β(n) = n² + 1
    Channel,
    /// β(n) = c₀ + c₁n + c₂n² + …, positive leading coefficient.
    Poly(Vec<i64>),
}

pub const SPHERE_FORMULA: &str = "n*(n+1)";
pub const CHANNEL_FORMULA: &str = "n^2+1";

impl BetaLaw {
    /// Evaluates β(n) exactly. `None` when the value leaves `[1, u64::MAX]`.
    pub fn eval(&self, n: u32) -> Option<u64> {
        let n = n as u64;
        match self {
            // n ≤ 2³²-1, so n(n+1) < 2⁶⁴ and n²+1 < 2⁶⁴: no overflow.
            BetaLaw::Sphere => Some(n * (n + 1)),
            BetaLaw::Channel => Some(n * n + 1),
            BetaLaw::Poly(coeffs) => {
                let mut acc: i128 = 0;
                for &c in coeffs.iter().rev() {
                    acc = acc.checked_mul(n as i128)?.checked_add(c as i128)?;
                }
                if acc >= 1 && acc <= u64::MAX as i128 {
                    Some(acc as u64)
                } else {
                    None
                }
            }
        }
    }

    fn validate_shape(&self) -> Result<(), Error> {
        if let BetaLaw::Poly(coeffs) = self {
            let degree = coeffs
                .iter()
                .rposition(|&c| c != 0)
                .ok_or_else(|| Error::InvalidSpec("polynomial is identically zero".into()))?;
            if degree == 0 {
                return Err(Error::InvalidSpec(
                    "constant polynomial cannot be strictly increasing".into(),
                ));
            }
            if coeffs[degree] < 0 {
                return Err(Error::InvalidSpec(
                    "leading coefficient must be positive".into(),
                ));
            }
        }
        Ok(())
    }
}

// In files a law is either one of the two formula strings or a coefficient
// list: "n*(n+1)" | "n^2+1" | [c0, c1, ...].
impl Serialize for BetaLaw {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            BetaLaw::Sphere => serializer.serialize_str(SPHERE_FORMULA),
            BetaLaw::Channel => serializer.serialize_str(CHANNEL_FORMULA),
            BetaLaw::Poly(coeffs) => coeffs.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for BetaLaw {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Formula(String),
            Coeffs(Vec<i64>),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Formula(s) => match s.replace(' ', "").as_str() {
                SPHERE_FORMULA => Ok(BetaLaw::Sphere),
                CHANNEL_FORMULA => Ok(BetaLaw::Channel),
                other => Err(D::Error::custom(format!(
                    "unknown beta formula {other:?}; use {SPHERE_FORMULA:?}, {CHANNEL_FORMULA:?} \
                     or a coefficient list [c0, c1, ...]"
                ))),
            },
            Repr::Coeffs(coeffs) => Ok(BetaLaw::Poly(coeffs)),
        }
    }
}

/// A dispersion law plus the admissibility constraints that apply to
/// candidate triples. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DispersionSpec {
    pub name: String,
    pub beta: BetaLaw,
    /// Require mᵢ ≤ nᵢ for all three modes.
    #[serde(rename = "m_le_n", default)]
    pub require_m_le_n: bool,
    /// Require the nᵢ pairwise distinct.
    #[serde(rename = "distinct_n", default)]
    pub require_distinct_n: bool,
    /// Require |n₁ − n₂| ≤ n₃ ≤ n₁ + n₂.
    #[serde(rename = "triangle", default)]
    pub require_triangle: bool,
    /// Require n₁ + n₂ + n₃ odd.
    #[serde(rename = "odd_sum", default)]
    pub require_odd_sum: bool,
}

impl DispersionSpec {
    /// Spherical planetary waves: β(n) = n(n+1), all four constraints on.
    pub fn sphere() -> Self {
        DispersionSpec {
            name: "sphere".into(),
            beta: BetaLaw::Sphere,
            require_m_le_n: true,
            require_distinct_n: true,
            require_triangle: true,
            require_odd_sum: true,
        }
    }

    /// Drift waves in a channel: β(n) = n² + 1; only m ≤ n and distinct n.
    pub fn channel() -> Self {
        DispersionSpec {
            name: "channel".into(),
            beta: BetaLaw::Channel,
            require_m_le_n: true,
            require_distinct_n: true,
            require_triangle: false,
            require_odd_sum: false,
        }
    }

    /// Parses a spec description from JSON and checks its static shape.
    /// Domain-dependent validation (positivity, monotonicity, capacity)
    /// happens when a [`BetaTable`] is built.
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let spec: DispersionSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        if spec.name.is_empty() {
            return Err(Error::InvalidSpec("spec name must be non-empty".into()));
        }
        spec.beta.validate_shape()?;
        Ok(spec)
    }

    /// Evaluates β(n), if representable. See [`BetaLaw::eval`].
    pub fn beta(&self, n: u32) -> Option<u64> {
        self.beta.eval(n)
    }

    /// Exact resonance test: ω₁ + ω₂ = ω₃ in cleared-denominator form,
    ///
    ///   m₁·β(n₂)·β(n₃) + m₂·β(n₁)·β(n₃) = m₃·β(n₁)·β(n₂),
    ///
    /// evaluated in 128-bit integers. Returns false if β is not evaluable
    /// at some component. Symmetric under swapping `k1` and `k2`.
    ///
    /// Panics if a term exceeds u128; a [`BetaTable`] capacity check on the
    /// working domain rules that out.
    pub fn omega_compare(&self, k1: WaveVector, k2: WaveVector, k3: WaveVector) -> bool {
        let (Some(b1), Some(b2), Some(b3)) =
            (self.beta(k1.n), self.beta(k2.n), self.beta(k3.n))
        else {
            return false;
        };
        resonance_identity_holds(k1.m, k2.m, k3.m, b1, b2, b3)
    }

    /// True iff `m1 + m2 = m3` and every enabled constraint holds.
    /// Symmetric under swapping `k1` and `k2`.
    pub fn admissible(&self, k1: WaveVector, k2: WaveVector, k3: WaveVector) -> bool {
        let (n1, n2, n3) = (k1.n as u64, k2.n as u64, k3.n as u64);
        if k1.m as u64 + k2.m as u64 != k3.m as u64 {
            return false;
        }
        if self.require_m_le_n && !(k1.m <= k1.n && k2.m <= k2.n && k3.m <= k3.n) {
            return false;
        }
        if self.require_distinct_n && (n1 == n2 || n1 == n3 || n2 == n3) {
            return false;
        }
        if self.require_triangle && !(n1.abs_diff(n2) <= n3 && n3 <= n1 + n2) {
            return false;
        }
        if self.require_odd_sum && (n1 + n2 + n3) % 2 == 0 {
            return false;
        }
        true
    }
}

/// The cleared-denominator resonance identity on raw values.
pub(crate) fn resonance_identity_holds(m1: u32, m2: u32, m3: u32, b1: u64, b2: u64, b3: u64) -> bool {
    let term = |m: u32, x: u64, y: u64| -> u128 {
        (m as u128)
            .checked_mul(x as u128)
            .and_then(|t| t.checked_mul(y as u128))
            .expect("resonance term exceeds u128; capacity check should have rejected the domain")
    };
    let lhs = term(m1, b2, b3)
        .checked_add(term(m2, b1, b3))
        .expect("resonance sum exceeds u128; capacity check should have rejected the domain");
    lhs == term(m3, b1, b2)
}

/// β evaluated and validated on `[1, D]`: positive, strictly increasing,
/// and with enough headroom that every cleared-denominator term fits the
/// arithmetic the solver uses. Lookup is a plain array index.
#[derive(Debug, Clone)]
pub struct BetaTable {
    values: Vec<u64>,
    domain: u32,
}

impl BetaTable {
    /// Builds and validates the table. This is the capacity gate: it runs
    /// before any enumeration work and rejects domains whose quantities
    /// would not fit the solver's integer widths.
    pub fn build(spec: &DispersionSpec, domain: u32) -> Result<Self, Error> {
        let capacity = |reason: String| Error::Capacity { domain, reason };
        let mut values = Vec::with_capacity(domain as usize);
        let mut prev: u64 = 0;
        for n in 1..=domain {
            let v = spec.beta(n).ok_or_else(|| {
                capacity(format!("beta({n}) is not representable as a positive 64-bit integer"))
            })?;
            if v <= prev {
                return Err(Error::InvalidSpec(format!(
                    "beta must be strictly increasing: beta({n}) = {v} <= beta({}) = {prev}",
                    n - 1
                )));
            }
            prev = v;
            values.push(v);
        }
        // Identity terms are bounded by 2·D·β(D)²; require that to fit u128.
        if let Some(&top) = values.last() {
            (top as u128)
                .checked_mul(top as u128)
                .and_then(|sq| sq.checked_mul(2 * domain as u128))
                .ok_or_else(|| {
                    capacity(format!(
                        "2*D*beta(D)^2 with beta({domain}) = {top} overflows 128-bit arithmetic"
                    ))
                })?;
        }
        Ok(BetaTable { values, domain })
    }

    pub fn domain(&self) -> u32 {
        self.domain
    }

    /// β(n); panics if `n` is outside `[1, D]`.
    #[inline]
    pub fn get(&self, n: u32) -> u64 {
        self.values[n as usize - 1]
    }
}

/// One exact solution of the resonance system. `k3` is the sum mode;
/// `k1` and `k2` are kept in `(n, m)`-lexicographic order, so two triads
/// are equal iff they are the same solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Triad {
    k1: WaveVector,
    k2: WaveVector,
    k3: WaveVector,
}

impl Triad {
    /// Builds a triad from the interchangeable pair `(a, b)` and the sum
    /// mode, normalizing the pair order. Panics unless `a.m + b.m = sum.m`.
    pub fn new(a: WaveVector, b: WaveVector, sum: WaveVector) -> Self {
        assert!(
            a.m as u64 + b.m as u64 == sum.m as u64,
            "triad violates m1 + m2 = m3: {a} + {b} != {sum}"
        );
        if a.key() <= b.key() {
            Triad { k1: a, k2: b, k3: sum }
        } else {
            Triad { k1: b, k2: a, k3: sum }
        }
    }

    pub fn k1(&self) -> WaveVector {
        self.k1
    }

    pub fn k2(&self) -> WaveVector {
        self.k2
    }

    pub fn k3(&self) -> WaveVector {
        self.k3
    }

    pub fn vectors(&self) -> [WaveVector; 3] {
        [self.k1, self.k2, self.k3]
    }

    /// Sort key `(n1, n2, n3, m1)` plus tie-breakers, making the order
    /// total. For solutions of one spec the first four fields already
    /// decide.
    fn sort_key(&self) -> (u32, u32, u32, u32, u32, u32) {
        (
            self.k1.n, self.k2.n, self.k3.n, self.k1.m, self.k2.m, self.k3.m,
        )
    }
}

impl PartialOrd for Triad {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Triad {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl std::fmt::Display for Triad {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + {} -> {}", self.k1, self.k2, self.k3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn wv(m: u32, n: u32) -> WaveVector {
        WaveVector::new(m, n)
    }

    #[test]
    fn omega_compare_hand_verified_true() {
        // 4/156 + 5/210 = 9/182 on the sphere law.
        let spec = DispersionSpec::sphere();
        assert!(spec.omega_compare(wv(4, 12), wv(5, 14), wv(9, 13)));
    }

    #[test]
    fn omega_compare_hand_verified_false() {
        // 1/6 + 1/12 = 1/4 != 2/20.
        let spec = DispersionSpec::sphere();
        assert!(!spec.omega_compare(wv(1, 2), wv(1, 3), wv(2, 4)));
    }

    #[test]
    fn omega_compare_sum_mode_cannot_repeat_a_member() {
        // k1 = k3 would need m2·β(n1)·β(n3) = 0, impossible for positive m.
        let spec = DispersionSpec::sphere();
        let k = wv(3, 7);
        for m2 in 1..50 {
            for n2 in 1..50 {
                assert!(!spec.omega_compare(k, wv(m2, n2), k));
            }
        }
    }

    #[test]
    fn admissible_hand_verified() {
        let sphere = DispersionSpec::sphere();
        assert!(sphere.admissible(wv(4, 12), wv(5, 14), wv(9, 13)));
        // 2 + 4 + 6 is even: parity constraint rejects.
        assert!(!sphere.admissible(wv(1, 2), wv(1, 4), wv(2, 6)));
        // Channel has no parity constraint.
        let channel = DispersionSpec::channel();
        assert!(channel.admissible(wv(1, 2), wv(1, 4), wv(2, 6)));
    }

    #[test]
    fn admissible_checks_m_sum() {
        let channel = DispersionSpec::channel();
        assert!(!channel.admissible(wv(1, 2), wv(1, 4), wv(3, 6)));
    }

    #[test]
    fn preset_betas_strictly_increase() {
        for spec in [DispersionSpec::sphere(), DispersionSpec::channel()] {
            let table = BetaTable::build(&spec, 1000).unwrap();
            for n in 2..=1000 {
                assert!(table.get(n) > table.get(n - 1), "{} at n={n}", spec.name);
            }
        }
    }

    #[test]
    fn preset_beta_values() {
        assert_eq!(BetaLaw::Sphere.eval(12), Some(156));
        assert_eq!(BetaLaw::Sphere.eval(13), Some(182));
        assert_eq!(BetaLaw::Sphere.eval(14), Some(210));
        assert_eq!(BetaLaw::Channel.eval(5), Some(26));
    }

    #[test]
    fn poly_law_matching_sphere_agrees() {
        let poly = BetaLaw::Poly(vec![0, 1, 1]); // n + n²
        for n in 1..200 {
            assert_eq!(poly.eval(n), BetaLaw::Sphere.eval(n));
        }
    }

    #[test]
    fn non_monotone_poly_rejected_at_table_build() {
        // n² - 5n + 7 dips between n = 1 and n = 2.
        let spec = DispersionSpec {
            name: "dip".into(),
            beta: BetaLaw::Poly(vec![7, -5, 1]),
            require_m_le_n: true,
            require_distinct_n: true,
            require_triangle: false,
            require_odd_sum: false,
        };
        assert!(matches!(
            BetaTable::build(&spec, 10),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn non_positive_poly_rejected() {
        let spec = DispersionSpec {
            name: "neg".into(),
            beta: BetaLaw::Poly(vec![-100, 1]),
            require_m_le_n: true,
            require_distinct_n: true,
            require_triangle: false,
            require_odd_sum: false,
        };
        assert!(BetaTable::build(&spec, 10).is_err());
    }

    #[test]
    fn constant_and_negative_leading_polys_rejected_at_parse() {
        assert!(DispersionSpec::from_json(
            r#"{"name": "c", "beta": [5], "m_le_n": true}"#
        )
        .is_err());
        assert!(DispersionSpec::from_json(
            r#"{"name": "d", "beta": [0, 0, -1], "m_le_n": true}"#
        )
        .is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        for spec in [DispersionSpec::sphere(), DispersionSpec::channel()] {
            let text = serde_json::to_string(&spec).unwrap();
            let back = DispersionSpec::from_json(&text).unwrap();
            assert_eq!(back, spec);
        }
        let custom = DispersionSpec {
            name: "cubic".into(),
            beta: BetaLaw::Poly(vec![1, 0, 0, 2]),
            require_m_le_n: false,
            require_distinct_n: true,
            require_triangle: false,
            require_odd_sum: false,
        };
        let text = serde_json::to_string(&custom).unwrap();
        assert_eq!(DispersionSpec::from_json(&text).unwrap(), custom);
    }

    #[test]
    fn spec_json_accepts_formula_strings() {
        let spec = DispersionSpec::from_json(
            r#"{"name": "s", "beta": "n*(n+1)", "m_le_n": true, "odd_sum": true}"#,
        )
        .unwrap();
        assert_eq!(spec.beta, BetaLaw::Sphere);
        assert!(spec.require_odd_sum);
        assert!(!spec.require_triangle); // omitted flags default to off
    }

    #[test]
    fn triad_canonicalizes_pair_order() {
        let t = Triad::new(wv(5, 14), wv(4, 12), wv(9, 13));
        assert_eq!(t.k1(), wv(4, 12));
        assert_eq!(t.k2(), wv(5, 14));
    }

    #[test]
    #[should_panic(expected = "m1 + m2 = m3")]
    fn triad_rejects_bad_m_sum() {
        Triad::new(wv(1, 2), wv(1, 3), wv(3, 4));
    }

    proptest! {
        #[test]
        fn checks_are_symmetric_in_the_pair(
            m1 in 1u32..60, n1 in 1u32..60,
            m2 in 1u32..60, n2 in 1u32..60,
            n3 in 1u32..60,
        ) {
            for spec in [DispersionSpec::sphere(), DispersionSpec::channel()] {
                let a = wv(m1, n1);
                let b = wv(m2, n2);
                let c = wv(m1 + m2, n3);
                prop_assert_eq!(spec.omega_compare(a, b, c), spec.omega_compare(b, a, c));
                prop_assert_eq!(spec.admissible(a, b, c), spec.admissible(b, a, c));
            }
        }
    }
}
