//! Exact integer kernel: GCD, fraction reduction, and the crosswise
//! reduction of a product of two fractions.
//!
//! The enumeration loop needs the ratio `(b3-b1)/(b2-b3) * b2/b1` in lowest
//! terms, but forming the two-factor products first would double the bit
//! width of the operands. [`cross_reduce`] avoids that with four pairwise
//! GCD passes: each fraction is reduced internally, then the numerator of
//! each is reduced against the denominator of the other. The surviving pair
//! multiplies out to an already-irreducible fraction, and no intermediate
//! ever exceeds the largest input.

/// Greatest common divisor of two positive integers, by Euclid's algorithm.
///
/// Panics if either argument is zero; negative inputs cannot occur at this
/// type. O(log min(a, b)) divisions.
pub fn gcd(a: u64, b: u64) -> u64 {
    assert!(a >= 1 && b >= 1, "gcd requires positive operands");
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// A fraction in lowest terms with positive numerator and denominator.
///
/// Construction goes through [`reduce`], so `gcd(num, den) == 1` always
/// holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ReducedFraction {
    num: u64,
    den: u64,
}

impl ReducedFraction {
    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }
}

impl std::fmt::Display for ReducedFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Brings `num/den` to lowest terms.
///
/// Panics if either argument is zero.
pub fn reduce(num: u64, den: u64) -> ReducedFraction {
    let g = gcd(num, den);
    ReducedFraction {
        num: num / g,
        den: den / g,
    }
}

/// A product of two fractions held in unmultiplied, crosswise-coprime form.
///
/// Each factor is internally irreducible, and the numerator of each factor
/// is coprime to the denominator of the other. Consequently
/// `(f1.num * f2.num) / (f1.den * f2.den)` is already in lowest terms — the
/// product can be formed later, under caller-checked bounds, without any
/// further reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossReducedProduct {
    pub f1: ReducedFraction,
    pub f2: ReducedFraction,
}

/// Reduces the product `(n1/d1) * (n2/d2)` to crosswise-coprime form
/// without multiplying anything.
///
/// The passes run in a fixed order: each fraction is reduced internally,
/// then `n1`'s survivor is reduced against `d2`'s, and `n2`'s against
/// `d1`'s. Every value this produces is a divisor of one of the inputs, so
/// nothing grows past `max(n1, d1, n2, d2)`.
///
/// Panics if any argument is zero.
pub fn cross_reduce(n1: u64, d1: u64, n2: u64, d2: u64) -> CrossReducedProduct {
    cross_reduce_with(n1, d1, n2, d2, |_| {})
}

/// Same as [`cross_reduce`], reporting every intermediate value to `probe`.
///
/// The probe sees each GCD and each quotient as it is produced; tests use
/// it to pin the no-growth guarantee. The plain entry point passes a no-op
/// closure, which compiles away.
pub fn cross_reduce_with(
    n1: u64,
    d1: u64,
    n2: u64,
    d2: u64,
    mut probe: impl FnMut(u64),
) -> CrossReducedProduct {
    assert!(
        n1 >= 1 && d1 >= 1 && n2 >= 1 && d2 >= 1,
        "cross_reduce requires positive operands"
    );

    // Internal reductions.
    let g1 = gcd(n1, d1);
    probe(g1);
    let (mut a1, mut b1) = (n1 / g1, d1 / g1);
    probe(a1);
    probe(b1);

    let g2 = gcd(n2, d2);
    probe(g2);
    let (mut a2, mut b2) = (n2 / g2, d2 / g2);
    probe(a2);
    probe(b2);

    // Crosswise: first numerator against second denominator, then second
    // numerator against first denominator.
    let gx = gcd(a1, b2);
    probe(gx);
    a1 /= gx;
    b2 /= gx;
    probe(a1);
    probe(b2);

    let gy = gcd(a2, b1);
    probe(gy);
    a2 /= gy;
    b1 /= gy;
    probe(a2);
    probe(b1);

    debug_assert_eq!(gcd(a1, b1), 1);
    debug_assert_eq!(gcd(a2, b2), 1);
    debug_assert_eq!(gcd(a1, b2), 1);
    debug_assert_eq!(gcd(a2, b1), 1);

    CrossReducedProduct {
        f1: ReducedFraction { num: a1, den: b1 },
        f2: ReducedFraction { num: a2, den: b2 },
    }
}
