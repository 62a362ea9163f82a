//! Exact rational univariate polynomials, as produced by interpolating
//! lattice-point counts of dilated polytopes.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::factorial;
use crate::error::{Error, Result};

/// Polynomial with exact rational coefficients, lowest degree first, without
/// trailing zeros. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EhrhartPolynomial {
    coefficients: Vec<BigRational>,
}

impl EhrhartPolynomial {
    pub fn new(mut coefficients: Vec<BigRational>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        EhrhartPolynomial { coefficients }
    }

    pub fn zero() -> Self {
        EhrhartPolynomial {
            coefficients: Vec::new(),
        }
    }

    /// The unique polynomial of degree `< values.len()` taking `values[t]` at
    /// `t = 0, 1, ...`, by Lagrange interpolation over the rationals.
    pub fn interpolate(values: &[BigInt]) -> Self {
        let k = values.len();
        let mut coefficients = vec![BigRational::zero(); k];
        for (node, y) in values.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            // basis polynomial prod_{m != node} (t - m), built low degree first
            let mut basis = vec![BigInt::one()];
            let mut denom = BigInt::one();
            for m in 0..k {
                if m == node {
                    continue;
                }
                let mut next = vec![BigInt::zero(); basis.len() + 1];
                for (d, b) in basis.iter().enumerate() {
                    next[d + 1] += b;
                    next[d] -= b * BigInt::from(m);
                }
                basis = next;
                denom *= BigInt::from(node as i64 - m as i64);
            }
            for (d, b) in basis.into_iter().enumerate() {
                coefficients[d] += BigRational::new(b * y, denom.clone());
            }
        }
        Self::new(coefficients)
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.coefficients.last()
    }

    pub fn evaluate(&self, t: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn evaluate_int(&self, t: i64) -> BigRational {
        self.evaluate(&BigRational::from_integer(BigInt::from(t)))
    }

    /// `d! * leading coefficient` with `d` the degree; 0 for the zero
    /// polynomial. This is the normalized volume when the polynomial is an
    /// Ehrhart polynomial of a `d`-dimensional lattice polytope.
    pub fn normalized_volume(&self) -> Result<BigUint> {
        let Some(d) = self.degree() else {
            return Ok(BigUint::zero());
        };
        let scaled = self.coefficients[d].clone() * BigRational::from_integer(factorial(d as u64).into());
        if !scaled.is_integer() || scaled.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "leading coefficient {} times {d}! is not a nonnegative integer",
                self.coefficients[d]
            )));
        }
        Ok(scaled.to_integer().to_biguint().expect("checked nonnegative"))
    }

    /// Values at `t = 0..count` as integers, if they are all integral.
    pub fn integer_values(&self, count: usize) -> Option<Vec<BigInt>> {
        (0..count)
            .map(|t| {
                let v = self.evaluate_int(t as i64);
                v.is_integer().then(|| v.to_integer())
            })
            .collect()
    }
}

fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl fmt::Display for EhrhartPolynomial {
    /// Coefficients from the constant term upward, e.g. `1, 11/6, 1, 1/6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.coefficients.iter().map(format_rational).collect();
        f.write_str(&parts.join(", "))
    }
}

impl FromStr for EhrhartPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coefficients = s
            .split(',')
            .map(|part| {
                parse_rational(part).ok_or_else(|| Error::Parse {
                    line: 1,
                    message: format!("bad rational {part:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coefficients))
    }
}

impl Serialize for EhrhartPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.coefficients.iter().map(format_rational).collect();
        parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EhrhartPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(deserializer)?;
        let coefficients = parts
            .iter()
            .map(|p| {
                parse_rational(p)
                    .ok_or_else(|| serde::de::Error::custom(format!("bad rational {p:?}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(Self::new(coefficients))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn interpolates_binomial() {
        // binomial(t+3, 3) at t = 0..3
        let p = EhrhartPolynomial::interpolate(&ints(&[1, 4, 10, 20]));
        assert_eq!(p.to_string(), "1, 11/6, 1, 1/6");
        assert_eq!(p.evaluate_int(4), BigRational::from_integer(35.into()));
        assert_eq!(p.normalized_volume().unwrap(), BigUint::from(1u32));
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = EhrhartPolynomial::interpolate(&ints(&[1, 1, 1]));
        assert_eq!(p.degree(), Some(0));
        assert_eq!(p.to_string(), "1");
        assert_eq!(p.normalized_volume().unwrap(), BigUint::from(1u32));

        let z = EhrhartPolynomial::interpolate(&ints(&[0, 0]));
        assert_eq!(z.degree(), None);
        assert_eq!(z.to_string(), "0");
        assert_eq!(z.normalized_volume().unwrap(), BigUint::zero());
    }

    #[test]
    fn text_and_json_round_trip() {
        let p = EhrhartPolynomial::interpolate(&ints(&[1, 5, 15, 35, 70]));
        let parsed: EhrhartPolynomial = p.to_string().parse().unwrap();
        assert_eq!(parsed, p);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<EhrhartPolynomial>(&json).unwrap(), p);
    }

    #[test]
    fn rejects_non_integral_volume() {
        let p = EhrhartPolynomial::new(vec![BigRational::one(), BigRational::new(1.into(), 2.into())]);
        assert!(p.normalized_volume().is_err());
    }
}
