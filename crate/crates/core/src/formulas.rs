//! Closed-form frieze counts over Z/nZ.
//!
//! The tame count factors over the prime powers dividing n, with each
//! factor built from p^{m-1} ± 1; the regular count is a product of the
//! per-prime-power quantity Φ_m(p^r), which branches on the parity of m
//! and k = m/2. Some branches assemble through rationals (q-brackets with
//! base p^{2-k} < 1), so everything is computed in exact rational
//! arithmetic and asserted integral at the end — an inexact division here
//! is a bug, never a rounding.
//!
//! Every function in this module has an independent counting counterpart
//! in [`crate::pathcount`]; the test suites compare the two on grids.

use crate::modring::{self, factorize, q_binom2, q_bracket, rational_pow};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// p^e as a big natural, for signed exponents known to be nonnegative.
fn power(p: u64, exp: i64) -> BigUint {
    assert!(exp >= 0, "exponent {exp} is negative");
    BigUint::from(p).pow(exp as u32)
}

/// p^e as an exact rational, any sign of e.
fn rational_power(base: &BigRational, exp: i64) -> BigRational {
    let powed = rational_pow(base, exp.unsigned_abs() as u32);
    if exp < 0 {
        powed.recip()
    } else {
        powed
    }
}

fn to_natural(x: BigRational, context: &str) -> BigUint {
    assert!(x.is_integer(), "{context}: {x} is not an integer");
    let int = x.to_integer();
    assert!(!int.is_negative(), "{context}: {int} is negative");
    int.to_biguint().expect("checked nonnegative")
}

/// Number of tame friezes of width m over Z/nZ:
/// the product over p | n of p^{(ν_p−1)(m−1)} (p^{m−1}+(−1)^m)(p−1)/(p+1).
pub fn tame_count_formula(n: u64, m: u32) -> BigUint {
    assert!(n >= 1, "modulus must be at least 1");
    assert!(m >= 2, "width must be at least 2, got {m}");
    let mut result = BigUint::one();
    for pp in factorize(n).prime_powers() {
        let p = pp.prime;
        let signed = if m.is_multiple_of(2) {
            power(p, m as i64 - 1) + BigUint::one()
        } else {
            power(p, m as i64 - 1) - BigUint::one()
        };
        let (factor, rem) = (signed * (p - 1)).div_rem(&BigUint::from(p + 1));
        assert!(
            rem.is_zero(),
            "tame factor for p={p}, m={m} did not divide exactly"
        );
        result *= power(p, (pp.exponent as i64 - 1) * (m as i64 - 1)) * factor;
    }
    result
}

/// The prime-field special case: (p^{m−1}+(−1)^m)(p−1)/(p+1).
pub fn tame_count_field(p: u64, m: u32) -> BigUint {
    assert!(modring::is_prime(p), "{p} is not prime");
    assert!(m >= 2, "width must be at least 2, got {m}");
    let signed = if m.is_multiple_of(2) {
        power(p, m as i64 - 1) + BigUint::one()
    } else {
        power(p, m as i64 - 1) - BigUint::one()
    };
    let (count, rem) = (signed * (p - 1)).div_rem(&BigUint::from(p + 1));
    assert!(
        rem.is_zero(),
        "field count for p={p}, m={m} did not divide exactly"
    );
    count
}

/// Φ_m(p^r): regular friezes of width m over Z/p^rZ.
///
/// For m = 2k+1 this is p^{(r−1)(m−3)} [k]_{p²}. For m = 2k it branches:
/// k even with p odd; k even with p = 2 and r > 1; and otherwise (k odd,
/// or k even with p = 2, r = 1). The leading power has a negative exponent
/// when m = 2, so assembly runs through exact rationals.
pub fn phi_m(p: u64, r: u32, m: u32) -> BigUint {
    assert!(modring::is_prime(p), "{p} is not prime");
    assert!(r >= 1, "exponent must be at least 1");
    assert!(m >= 2, "width must be at least 2, got {m}");
    let p_rat = BigRational::from_integer(BigInt::from(p));
    let lead = rational_power(&p_rat, (r as i64 - 1) * (m as i64 - 3));
    let body = if m % 2 == 1 {
        let k = (m - 1) / 2;
        let q2 = BigRational::from_integer(BigInt::from(p) * BigInt::from(p));
        q_bracket(k, &q2)
    } else {
        let k = m / 2;
        let binom = BigRational::from_integer(BigInt::from(q_binom2(k, p)));
        let pm1 = BigRational::from_integer(BigInt::from(p - 1));
        if k.is_multiple_of(2) && p != 2 {
            pm1 * binom
        } else if k.is_multiple_of(2) && p == 2 && r != 1 {
            pm1 * binom + BigRational::from_integer(BigInt::from(p).pow(k - 1) - BigInt::one())
        } else {
            let q = rational_power(&p_rat, 2 - k as i64);
            let bracket = q_bracket(r - 1, &q);
            pm1 * (binom + bracket) + rational_power(&p_rat, k as i64 - 1)
        }
    };
    to_natural(lead * body, &format!("Φ_{m}({p}^{r})"))
}

/// Number of regular tame friezes of width m over Z/nZ:
/// the product of Φ_m over the prime powers dividing n.
pub fn regular_count_formula(n: u64, m: u32) -> BigUint {
    assert!(n >= 1, "modulus must be at least 1");
    assert!(m >= 2, "width must be at least 2, got {m}");
    factorize(n)
        .prime_powers()
        .iter()
        .map(|pp| phi_m(pp.prime, pp.exponent, m))
        .product()
}

/// Φ_m(p) over the prime field, by direct integer arithmetic — an
/// implementation independent of [`phi_m`], kept separate so the two can
/// cross-check each other at r = 1.
pub fn phi_field(p: u64, m: u32) -> BigUint {
    assert!(modring::is_prime(p), "{p} is not prime");
    assert!(m >= 2, "width must be at least 2, got {m}");
    if m % 2 == 1 {
        let k = (m - 1) / 2;
        // [k]_{p²} as a plain geometric sum
        (0..k).fold(BigUint::zero(), |acc, j| acc + power(p, 2 * j as i64))
    } else {
        let k = m / 2;
        let base = q_binom2(k, p) * (p - 1);
        if k.is_multiple_of(2) && p != 2 {
            base
        } else {
            base + power(p, k as i64 - 1)
        }
    }
}

/// Closed form for |Z_k(r)| = p^{(r−1)(2k−2)+1} ((p−1)[r−1]_{p^{2−k}} + p^{k−1}),
/// computed twice — once through rational q-brackets and once as a plain
/// integer sum with the leading power distributed inside — and checked for
/// agreement before returning.
pub fn z_closed_form(p: u64, r: u32, k: u32) -> BigUint {
    assert!(modring::is_prime(p), "{p} is not prime");
    assert!(r >= 1 && k >= 1, "need r >= 1 and k >= 1, got r={r}, k={k}");
    let lead_exp = (r as i64 - 1) * (2 * k as i64 - 2) + 1;

    let p_rat = BigRational::from_integer(BigInt::from(p));
    let q = rational_power(&p_rat, 2 - k as i64);
    let body = BigRational::from_integer(BigInt::from(p - 1)) * q_bracket(r - 1, &q)
        + rational_power(&p_rat, k as i64 - 1);
    let via_brackets = to_natural(
        rational_power(&p_rat, lead_exp) * body,
        &format!("|Z_{k}({r})| over p={p}"),
    );

    let mut via_sum = power(p, lead_exp - 1 + k as i64);
    for j in 0..r.saturating_sub(1) {
        via_sum += power(p, lead_exp + (2 - k as i64) * j as i64) * (p - 1);
    }
    assert_eq!(
        via_brackets, via_sum,
        "the two closed-form assemblies disagree at p={p}, r={r}, k={k}"
    );
    via_brackets
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FriezeKind {
    Tame,
    Regular,
}

/// A frieze-count request: which kind, over which modulus, at which width.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct FriezeCountQuery {
    pub kind: FriezeKind,
    pub n: u64,
    pub m: u32,
}

impl FriezeCountQuery {
    pub fn new(kind: FriezeKind, n: u64, m: u32) -> Self {
        assert!(n >= 2, "modulus must be at least 2, got {n}");
        assert!(m >= 2, "width must be at least 2, got {m}");
        FriezeCountQuery { kind, n, m }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fareygraph::FareyGraph;
    use crate::modring::totient;
    use crate::pathcount::{count_x, count_y, count_z};
    use proptest::prelude::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn tame_examples() {
        assert_eq!(tame_count_formula(5, 6), big(2084));
        assert_eq!(tame_count_formula(2, 3), big(1));
        assert_eq!(tame_count_formula(4, 3), big(4));
        assert_eq!(tame_count_formula(1, 5), big(1));
        assert_eq!(tame_count_field(5, 6), big(2084));
        assert_eq!(tame_count_field(2, 2), big(1));
        for p in [2u64, 3, 5, 7, 11] {
            for m in 2..=9 {
                assert_eq!(tame_count_formula(p, m), tame_count_field(p, m));
            }
        }
    }

    #[test]
    fn field_count_agrees_with_path_oracle() {
        // both the formula and φ(p)·|X_m(p)| give 14 at p=3, m=4
        let g = FareyGraph::build(3).unwrap();
        let by_paths = count_x(&g, 4).unwrap() * totient(3);
        assert_eq!(by_paths, big(14));
        assert_eq!(tame_count_field(3, 4), big(14));
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_m(2, 2, 5), big(20));
        assert_eq!(phi_m(2, 2, 4), big(4));
        assert_eq!(phi_m(2, 3, 6), big(800));
        assert_eq!(phi_m(3, 1, 5), big(10));
        for p in [2u64, 3, 5] {
            for r in 1..=3 {
                assert_eq!(phi_m(p, r, 2), big(1), "width 2 has a single frieze");
            }
        }
    }

    #[test]
    fn regular_examples() {
        assert_eq!(regular_count_formula(2, 4), big(3));
        assert_eq!(regular_count_formula(3, 4), big(2));
        assert_eq!(regular_count_formula(12, 5), big(200));
        assert_eq!(regular_count_formula(1, 4), big(1));
    }

    #[test]
    fn field_phi_examples() {
        assert_eq!(phi_field(2, 4), big(3));
        assert_eq!(phi_field(5, 5), big(26));
        assert_eq!(phi_field(2, 6), big(11));
        assert_eq!(phi_field(3, 4), big(2));
    }

    #[test]
    fn rational_and_integer_phi_agree_at_r_1() {
        for p in [2u64, 3, 5, 7] {
            for m in 2..=9 {
                assert_eq!(phi_m(p, 1, m), phi_field(p, m), "p={p} m={m}");
            }
        }
    }

    #[test]
    fn regular_formula_matches_path_counts() {
        for n in 2..=8u64 {
            let g = FareyGraph::build(n).unwrap();
            for m in 2..=5u32 {
                let y = count_y(&g, m).unwrap();
                let (per_n, rem) = y.div_rem(&big(n));
                assert!(rem.is_zero());
                assert_eq!(regular_count_formula(n, m), per_n, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn z_closed_form_examples() {
        for p in [2u64, 3, 5] {
            for r in 1..=3 {
                assert_eq!(z_closed_form(p, r, 1), big(p.pow(r)));
            }
        }
        assert_eq!(z_closed_form(2, 2, 2), big(24));
        assert_eq!(z_closed_form(3, 2, 2), big(135));
        for p in [2u64, 3] {
            for r in 1..=2 {
                for k in 1..=3 {
                    assert_eq!(
                        z_closed_form(p, r, k),
                        count_z(p, r, k).unwrap(),
                        "p={p} r={r} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn query_serialization() {
        let q = FriezeCountQuery::new(FriezeKind::Regular, 12, 5);
        let json = serde_json::to_value(q).unwrap();
        assert_eq!(json["kind"], "regular");
        assert_eq!(json["n"], 12);
        assert_eq!(json["m"], 5);
    }

    proptest! {
        // the rational assembly always lands on an integer, and matches the
        // independent integer route over the prime field
        #[test]
        fn phi_assembles_integrally(pi in 0usize..4, r in 1u32..4, m in 2u32..10) {
            let p = [2u64, 3, 5, 7][pi];
            let _ = phi_m(p, r, m);
            prop_assert_eq!(phi_m(p, 1, m), phi_field(p, m));
        }

        #[test]
        fn tame_formula_is_multiplicative(m in 2u32..7) {
            for (a, b) in [(2u64, 3u64), (2, 5), (3, 4), (4, 5), (2, 9)] {
                prop_assert_eq!(
                    tame_count_formula(a * b, m),
                    tame_count_formula(a, m) * tame_count_formula(b, m)
                );
                prop_assert_eq!(
                    regular_count_formula(a * b, m),
                    regular_count_formula(a, m) * regular_count_formula(b, m)
                );
            }
        }
    }
}
