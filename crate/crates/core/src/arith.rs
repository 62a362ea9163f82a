//! Small exact-integer helpers shared across modules.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

/// `binomial(n, k)` for nonnegative `n`, `k`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `binomial(n, k)` when it fits in a `u64`.
pub fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    binomial(n, k).to_u64()
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// Multinomial coefficient `(sum parts)! / prod(parts!)`, built as a product
/// of binomials so intermediate values never exceed the result.
pub fn multinomial(parts: &[u64]) -> BigUint {
    let mut total = 0u64;
    let mut acc = BigUint::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}

/// `x^e` for a signed base.
pub fn pow(x: i64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(x), e as usize)
}
