//! Exact modular arithmetic: residues, prime factorization, CRT, p-adic
//! valuations, and the q-analogue quantities used by the counting formulas.
//!
//! Everything here is exact. Counts and q-analogue intermediates that can
//! outgrow machine words use [`BigUint`]/[`BigRational`]; moduli themselves
//! stay in `u64` (the library targets desk-scale moduli).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Errors from modular-arithmetic operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModRingError {
    /// The element has no multiplicative inverse modulo its modulus.
    #[error("{value} is not a unit modulo {modulus}")]
    NotAUnit { value: u64, modulus: u64 },
    /// CRT combination requires coprime moduli.
    #[error("moduli {0} and {1} are not coprime")]
    ModuliNotCoprime(u64, u64),
}

/// An element of Z/nZ, stored as its canonical representative in `0..n`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduce `value` into `0..modulus`. Panics if `modulus == 0`.
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Residue {
            value: value % modulus,
            modulus,
        }
    }

    /// Build a residue from a possibly negative representative.
    pub fn from_signed(value: i64, modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let m = modulus as i64;
        Residue {
            value: value.rem_euclid(m) as u64,
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// True when the value is coprime to the modulus.
    pub fn is_unit(&self) -> bool {
        gcd(self.value, self.modulus) == 1
    }

    pub fn add(&self, other: &Residue) -> Residue {
        self.check_same_modulus(other);
        let v = ((self.value as u128 + other.value as u128) % self.modulus as u128) as u64;
        Residue::new(v, self.modulus)
    }

    pub fn sub(&self, other: &Residue) -> Residue {
        self.check_same_modulus(other);
        let v = (self.value + self.modulus - other.value) % self.modulus;
        Residue::new(v, self.modulus)
    }

    pub fn mul(&self, other: &Residue) -> Residue {
        self.check_same_modulus(other);
        Residue::new(
            mul_mod_free(self.value, other.value, self.modulus),
            self.modulus,
        )
    }

    pub fn neg(&self) -> Residue {
        Residue::new((self.modulus - self.value) % self.modulus, self.modulus)
    }

    /// Multiplicative inverse, when the value is a unit.
    pub fn inverse(&self) -> Result<Residue, ModRingError> {
        inverse(self)
    }

    /// Reduce into Z/mZ. The result is independent of the representative
    /// whenever `m` divides the modulus.
    pub fn reduce(&self, m: u64) -> Residue {
        Residue::new(self.value % m, m)
    }

    fn check_same_modulus(&self, other: &Residue) {
        assert_eq!(
            self.modulus, other.modulus,
            "residue arithmetic requires equal moduli"
        );
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A prime power p^r with r >= 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

/// Prime factorization with primes strictly ascending.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Factorization(Vec<PrimePower>);

impl Factorization {
    pub fn prime_powers(&self) -> &[PrimePower] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Product of all prime powers; 1 for the empty factorization.
    pub fn product(&self) -> u64 {
        self.0.iter().map(PrimePower::value).product()
    }

    /// The (p, r) pair when the factorization is a single prime power.
    pub fn as_prime_power(&self) -> Option<PrimePower> {
        match self.0.as_slice() {
            [pp] => Some(*pp),
            _ => None,
        }
    }
}

impl<'a> IntoIterator for &'a Factorization {
    type Item = &'a PrimePower;
    type IntoIter = std::slice::Iter<'a, PrimePower>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// p-adic valuation; `Infinite` is the valuation of 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Trial-division factorization. `n = 1` yields the empty factorization.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut rest = n;
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut exponent = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                exponent += 1;
            }
            factors.push(PrimePower { prime: p, exponent });
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push(PrimePower {
            prime: rest,
            exponent: 1,
        });
    }
    Factorization(factors)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && factorize(n).prime_powers()
            == [PrimePower {
                prime: n,
                exponent: 1,
            }]
}

/// Largest e with p^e dividing a; infinite for a = 0.
pub fn valuation(a: u64, p: u64) -> Valuation {
    assert!(p >= 2, "valuation requires p >= 2");
    if a == 0 {
        return Valuation::Infinite;
    }
    let mut rest = a;
    let mut e = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    Valuation::Finite(e)
}

/// Euler totient: the order of (Z/nZ)^x.
pub fn totient(n: u64) -> u64 {
    assert!(n >= 1, "totient requires n >= 1");
    factorize(n)
        .prime_powers()
        .iter()
        .map(|pp| pp.prime.pow(pp.exponent - 1) * (pp.prime - 1))
        .product()
}

/// All units of Z/nZ in ascending order. `units(1)` is `[0]`, the unique
/// element of the zero ring, which is its own unit.
pub fn units(n: u64) -> Vec<Residue> {
    assert!(n >= 1, "units requires n >= 1");
    if n == 1 {
        return vec![Residue::new(0, 1)];
    }
    (1..n)
        .filter(|&v| gcd(v, n) == 1)
        .map(|v| Residue::new(v, n))
        .collect()
}

/// Multiplicative inverse by extended Euclid.
pub fn inverse(a: &Residue) -> Result<Residue, ModRingError> {
    let n = a.modulus();
    if n == 1 {
        return Ok(Residue::new(0, 1));
    }
    let (g, x, _) = extended_gcd(a.value() as i64, n as i64);
    if g != 1 {
        return Err(ModRingError::NotAUnit {
            value: a.value(),
            modulus: n,
        });
    }
    Ok(Residue::from_signed(x, n))
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Combine residues modulo coprime m and n into the unique residue mod mn.
pub fn crt_combine(a1: &Residue, a2: &Residue) -> Result<Residue, ModRingError> {
    let (m, n) = (a1.modulus(), a2.modulus());
    if gcd(m, n) != 1 {
        return Err(ModRingError::ModuliNotCoprime(m, n));
    }
    // x = a1 + m * ((a2 - a1) * m^{-1} mod n)
    let m_inv = inverse(&Residue::new(m % n, n))?;
    let diff = Residue::new(a2.value(), n).sub(&Residue::new(a1.value() % n, n));
    let k = diff.mul(&m_inv).value();
    let value = a1.value() as u128 + (m as u128) * (k as u128);
    Ok(Residue::new(
        (value % (m as u128 * n as u128)) as u64,
        m * n,
    ))
}

/// The bracket (q^k - 1)/(q - 1) over exact rationals, with the q = 1
/// limit equal to k. Accepts any positive rational base; the counting
/// formulas feed it bases like p^(2-k) that are below 1.
pub fn q_bracket(k: u32, q: &BigRational) -> BigRational {
    assert!(q.is_positive(), "q_bracket requires q > 0");
    if q.is_one() {
        return BigRational::from_integer(BigInt::from(k));
    }
    let qk = rational_pow(q, k);
    let one = BigRational::one();
    (qk - &one) / (q - &one)
}

/// q raised to a (possibly negative) integer power.
pub fn rational_pow(q: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= q;
    }
    acc
}

/// The quantity (q^k - 1)(q^{k-1} - 1) / ((q - 1)(q^2 - 1)) for integer
/// q >= 1, always an exact integer; the q = 1 limit is k(k-1)/2.
pub fn q_binom2(k: u32, q: u64) -> BigUint {
    assert!(k >= 1, "q_binom2 requires k >= 1");
    assert!(q >= 1, "q_binom2 requires q >= 1");
    if q == 1 {
        return BigUint::from(k as u64) * BigUint::from((k - 1) as u64) / BigUint::from(2u32);
    }
    let q = BigUint::from(q);
    let one = BigUint::one();
    let numerator = (q.pow(k) - &one) * (q.pow(k - 1) - &one);
    let denominator = (&q - &one) * (q.pow(2) - &one);
    let (quot, rem) = numerator.div_rem(&denominator);
    assert!(rem.is_zero(), "q_binom2 division must be exact");
    quot
}

#[inline]
fn mul_mod_free(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

/// (a * b) mod n without overflow for any u64 inputs.
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    mul_mod_free(a % n, b % n, n)
}
