//! Prime search and arithmetic in prime fields of width below 2^61.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Exclusive upper bound on every modulus.
pub const MODULUS_LIMIT: u64 = 1 << 61;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("smallest prime above {0} does not fit below 2^61")]
    ParameterOverflow(u64),
    #[error("{0} is not a prime below 2^61")]
    NotPrime(u64),
}

/// Deterministic primality test: trial division below 2^32, Miller-Rabin with
/// a witness set that is exact for every 64-bit input above that.
pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    if x < 1 << 32 {
        if x % 2 == 0 {
            return x == 2;
        }
        let mut d = 3u64;
        while d * d <= x {
            if x % d == 0 {
                return false;
            }
            d += 2;
        }
        return true;
    }
    miller_rabin(x)
}

fn miller_rabin(x: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if x % 2 == 0 {
        return false;
    }
    let mut d = x - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut y = pow_mod(a % x, d, x);
        if y == 1 || y == x - 1 {
            continue;
        }
        for _ in 1..s {
            y = mul_mod(y, y, x);
            if y == x - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// The least prime strictly greater than `x`.
pub fn smallest_prime_greater(x: u64) -> Result<u64, FieldError> {
    if x >= MODULUS_LIMIT - 1 {
        return Err(FieldError::ParameterOverflow(x));
    }
    let mut c = x + 1;
    while !is_prime(c) {
        c += 1;
        if c >= MODULUS_LIMIT {
            return Err(FieldError::ParameterOverflow(x));
        }
    }
    Ok(c)
}

/// Number of bits needed to write any value in `[0, p)`, i.e. `ceil(log2 p)`.
pub fn bit_width(p: u64) -> u32 {
    debug_assert!(p >= 2);
    64 - (p - 1).leading_zeros()
}

/// The field of integers modulo a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self, FieldError> {
        if modulus >= MODULUS_LIMIT || !is_prime(modulus) {
            return Err(FieldError::NotPrime(modulus));
        }
        Ok(PrimeField { modulus })
    }

    /// Field whose modulus is the least prime above `x`.
    pub fn above(x: u64) -> Result<Self, FieldError> {
        smallest_prime_greater(x).map(|modulus| PrimeField { modulus })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `ceil(log2 p)`: the width of one serialized element.
    #[inline]
    pub fn element_bits(&self) -> u32 {
        bit_width(self.modulus)
    }

    /// Embeds an integer, reducing it modulo p.
    #[inline]
    pub fn elem(&self, value: u64) -> FieldElem {
        FieldElem {
            value: value % self.modulus,
            modulus: self.modulus,
        }
    }

    /// Embeds a value already known to be reduced.
    ///
    /// Panics if `value >= p`.
    #[inline]
    pub fn elem_exact(&self, value: u64) -> FieldElem {
        assert!(
            value < self.modulus,
            "coordinate {value} is not below the modulus {}",
            self.modulus
        );
        FieldElem {
            value,
            modulus: self.modulus,
        }
    }

    #[inline]
    pub fn zero(&self) -> FieldElem {
        self.elem_exact(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElem {
        self.elem(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.modulus).map(move |v| self.elem_exact(v))
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.modulus)
    }
}

/// An element of a [`PrimeField`]. Mixing elements of different fields panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    value: u64,
    modulus: u64,
}

impl FieldElem {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        PrimeField {
            modulus: self.modulus,
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Square-and-multiply. `a^0 = 1` for every `a`, zero included.
    pub fn pow(self, exp: u64) -> FieldElem {
        FieldElem {
            value: pow_mod(self.value, exp, self.modulus),
            modulus: self.modulus,
        }
    }

    /// Multiplicative inverse via Fermat; `None` for zero.
    pub fn inverse(self) -> Option<FieldElem> {
        if self.value == 0 {
            None
        } else {
            Some(self.pow(self.modulus - 2))
        }
    }

    #[inline]
    fn same_field(&self, other: &FieldElem) {
        assert_eq!(
            self.modulus, other.modulus,
            "arithmetic between elements of different fields"
        );
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for FieldElem {
    type Output = FieldElem;

    #[inline]
    fn add(self, rhs: FieldElem) -> FieldElem {
        self.same_field(&rhs);
        // Both operands are below 2^61, the sum cannot wrap.
        let s = self.value + rhs.value;
        FieldElem {
            value: if s >= self.modulus { s - self.modulus } else { s },
            modulus: self.modulus,
        }
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;

    #[inline]
    fn sub(self, rhs: FieldElem) -> FieldElem {
        self.same_field(&rhs);
        let value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.modulus - rhs.value
        };
        FieldElem {
            value,
            modulus: self.modulus,
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;

    fn neg(self) -> FieldElem {
        self.field().zero() - self
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;

    #[inline]
    fn mul(self, rhs: FieldElem) -> FieldElem {
        self.same_field(&rhs);
        FieldElem {
            value: mul_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}
