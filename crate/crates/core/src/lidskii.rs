//! Closed-form Lidskii evaluators for flow polytope volumes and lattice-point
//! counts in the nice chamber.
//!
//! All three evaluators sum over weak compositions `j` of `|E| - n` that
//! dominate `out_G = (outdeg(i) - 1)_i`, weighting each by the kernel value
//! `K_G(j - out_G, 0)`. The kernel values come from the brute-force
//! [`FlowCounter`], never from the formulas themselves.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, multinomial, pow};
use crate::error::{Error, Result};
use crate::graph::{DirectedMultigraph, NetflowVector};
use crate::kostant::FlowCounter;

/// `<<n, k>> = binomial(n + k - 1, k)` read as a polynomial in `n`, i.e.
/// `n (n+1) ... (n+k-1) / k!`.
///
/// For `n >= 1` this is the ordinary count of size-`k` multisets from `n`
/// types. For `n <= 0` it vanishes when `n + k - 1 >= 0` and is
/// `(-1)^k binomial(-n, k)` otherwise; the lattice-point formula needs these
/// signed values whenever `a_i < in_G(i)`.
pub fn multiset_coeff(n: i64, k: u64) -> BigInt {
    if n >= 1 {
        return BigInt::from(binomial((n + k as i64 - 1) as u64, k));
    }
    let magnitude = binomial((-n) as u64, k);
    if k % 2 == 0 {
        BigInt::from(magnitude)
    } else {
        -BigInt::from(magnitude)
    }
}

/// `c (c+1) ... (c+j-1) / j!`, the rising factorial over `j!`.
///
/// Computed directly from the product, as an independent route to
/// [`multiset_coeff`]; the two agree for every integer `c`.
pub fn rising_factorial_over_fact(c: i64, j: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..j {
        acc *= c + i as i64;
        acc /= i + 1;
    }
    acc
}

/// Weak composition with its parts in vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeakComposition(pub Vec<u64>);

impl WeakComposition {
    pub fn parts(&self) -> &[u64] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Every prefix sum is at least the matching prefix sum of `lower`.
    pub fn dominates(&self, lower: &[i64]) -> bool {
        let mut ours = 0i64;
        let mut theirs = 0i64;
        self.0.len() == lower.len()
            && self.0.iter().zip(lower).all(|(&j, &b)| {
                ours += j as i64;
                theirs += b;
                ours >= theirs
            })
    }
}

/// All weak compositions of `total` into `lower.len()` parts that dominate
/// `lower`, in lexicographic order.
pub fn dominant_compositions(total: u64, lower: &[i64]) -> Result<Vec<WeakComposition>> {
    let sum: i64 = lower.iter().sum();
    if sum != total as i64 {
        return Err(Error::InvalidArgument(format!(
            "lower bound sums to {sum}, expected {total}"
        )));
    }
    let mut out = Vec::new();
    if lower.is_empty() {
        out.push(WeakComposition(Vec::new()));
        return Ok(out);
    }
    let mut prefix_lower = Vec::with_capacity(lower.len());
    let mut acc = 0i64;
    for &b in lower {
        acc += b;
        prefix_lower.push(acc);
    }
    let mut parts = Vec::with_capacity(lower.len());
    fn fill(
        k: usize,
        used: u64,
        total: u64,
        prefix_lower: &[i64],
        parts: &mut Vec<u64>,
        out: &mut Vec<WeakComposition>,
    ) {
        if k + 1 == prefix_lower.len() {
            parts.push(total - used);
            out.push(WeakComposition(parts.clone()));
            parts.pop();
            return;
        }
        let min = (prefix_lower[k] - used as i64).max(0) as u64;
        for x in min..=total - used {
            parts.push(x);
            fill(k + 1, used + x, total, prefix_lower, parts, out);
            parts.pop();
        }
    }
    fill(0, 0, total, &prefix_lower, &mut parts, &mut out);
    Ok(out)
}

/// One summand family of the Lidskii formulas.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LidskiiTerm {
    pub composition: WeakComposition,
    /// `K_G(j_1 - out(1), ..., j_n - out(n), 0)`.
    #[serde(with = "crate::serde_big::biguint")]
    pub kernel: BigUint,
}

/// Per-graph data shared by the three evaluators: degree shifts, dominant
/// compositions and their kernel counts.
#[derive(Debug, Clone)]
pub struct LidskiiExpansion {
    graph: DirectedMultigraph,
    out_shift: Vec<i64>,
    in_shift: Vec<i64>,
    terms: Vec<LidskiiTerm>,
}

impl LidskiiExpansion {
    /// Checks that `g` is connected and every non-sink vertex has an out-edge.
    pub fn new(g: &DirectedMultigraph) -> Result<Self> {
        Self::with_counter(&mut FlowCounter::new(g))
    }

    /// Same as [`LidskiiExpansion::new`], reusing a counter's memo table.
    pub fn with_counter(counter: &mut FlowCounter) -> Result<Self> {
        let g = counter.graph().clone();
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let stats = g.degree_stats();
        if let Some(pos) = stats.outdeg[..g.vertex_count() - 1].iter().position(|&d| d == 0) {
            return Err(Error::Precondition {
                vertex: g.label(pos),
                reason: "non-sink vertex has no outgoing edge".into(),
            });
        }
        let n = g.vertex_count() - 1;
        let total = (g.edge_count() - n) as u64;
        let terms = dominant_compositions(total, &stats.out_shift)?
            .into_iter()
            .map(|composition| {
                let mut shifted: Vec<i64> = composition
                    .parts()
                    .iter()
                    .zip(&stats.out_shift)
                    .map(|(&j, &o)| j as i64 - o)
                    .collect();
                shifted.push(0);
                let kernel = counter.count(&shifted);
                LidskiiTerm {
                    composition,
                    kernel,
                }
            })
            .collect();
        Ok(LidskiiExpansion {
            graph: g,
            out_shift: stats.out_shift,
            in_shift: stats.in_shift,
            terms,
        })
    }

    pub fn graph(&self) -> &DirectedMultigraph {
        &self.graph
    }

    pub fn terms(&self) -> &[LidskiiTerm] {
        &self.terms
    }

    pub fn out_shift(&self) -> &[i64] {
        &self.out_shift
    }

    pub fn in_shift(&self) -> &[i64] {
        &self.in_shift
    }

    fn check_netflow(&self, a: &NetflowVector) -> Result<()> {
        if a.len() != self.graph.vertex_count() {
            return Err(Error::LengthMismatch {
                expected: self.graph.vertex_count(),
                actual: a.len(),
            });
        }
        if let Some(pos) = a.supplies().iter().position(|&x| x < 0) {
            return Err(Error::Precondition {
                vertex: self.graph.label(pos),
                reason: format!("netflow entry {} is negative (outside the nice chamber)", a.entries()[pos]),
            });
        }
        Ok(())
    }

    /// Normalized volume of `F_G(a)`:
    /// `sum_j multinomial(m-n; j) a^j K_G(j - out_G, 0)`.
    pub fn volume(&self, a: &NetflowVector) -> Result<BigUint> {
        self.check_netflow(a)?;
        let supplies = a.supplies();
        let mut total = BigInt::zero();
        for term in &self.terms {
            if term.kernel.is_zero() {
                continue;
            }
            let parts = term.composition.parts();
            let mut product = BigInt::from(multinomial(parts));
            for (&x, &j) in supplies.iter().zip(parts) {
                product *= pow(x, j);
            }
            total += product * BigInt::from(term.kernel.clone());
        }
        Ok(total.to_biguint().expect("sum of nonnegative terms"))
    }

    /// Lattice-point count of `F_G(a)`:
    /// `sum_j prod_i <<a_i - in_G(i), j_i>> K_G(j - out_G, 0)`.
    pub fn count(&self, a: &NetflowVector) -> Result<BigUint> {
        self.check_netflow(a)?;
        let supplies = a.supplies();
        let mut total = BigInt::zero();
        for term in &self.terms {
            if term.kernel.is_zero() {
                continue;
            }
            let mut product = BigInt::from(term.kernel.clone());
            for ((&x, &shift), &j) in supplies.iter().zip(&self.in_shift).zip(term.composition.parts()) {
                product *= multiset_coeff(x - shift, j);
                if product.is_zero() {
                    break;
                }
            }
            total += product;
        }
        total.to_biguint().ok_or_else(|| {
            Error::InvalidArgument(format!("lattice-point sum is negative ({total})"))
        })
    }

    /// Lattice-point count of `F_G(a)` at `a_i = in_G(i) + c_i`, written with
    /// rising factorials: `sum_j prod_i (c_i)^(j_i) / j_i! K_G(j - out_G, 0)`.
    pub fn count_c_form(&self, c: &[i64]) -> Result<BigUint> {
        let n = self.graph.vertex_count() - 1;
        if c.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: c.len(),
            });
        }
        if let Some(pos) = c.iter().position(|&x| x <= 0) {
            return Err(Error::NonPositiveMultiplicity {
                position: pos,
                value: c[pos],
            });
        }
        let mut total = BigInt::zero();
        for term in &self.terms {
            if term.kernel.is_zero() {
                continue;
            }
            let mut product = BigInt::from(term.kernel.clone());
            for (&ci, &j) in c.iter().zip(term.composition.parts()) {
                product *= rising_factorial_over_fact(ci, j);
            }
            total += product;
        }
        Ok(total.to_biguint().expect("c_i >= 1 makes every factor nonnegative"))
    }

    /// `(in_G(1) + c_1, ..., in_G(n) + c_n, -sum)`.
    pub fn netflow_for_c(&self, c: &[i64]) -> NetflowVector {
        let supplies: Vec<i64> = self.in_shift.iter().zip(c).map(|(s, c)| s + c).collect();
        NetflowVector::from_supplies(&supplies)
    }
}

pub fn lidskii_volume(g: &DirectedMultigraph, a: &NetflowVector) -> Result<BigUint> {
    LidskiiExpansion::new(g)?.volume(a)
}

pub fn lidskii_count(g: &DirectedMultigraph, a: &NetflowVector) -> Result<BigUint> {
    LidskiiExpansion::new(g)?.count(a)
}

pub fn lidskii_count_c_form(g: &DirectedMultigraph, c: &[i64]) -> Result<BigUint> {
    LidskiiExpansion::new(g)?.count_c_form(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn comps(v: &[&[u64]]) -> Vec<WeakComposition> {
        v.iter().map(|p| WeakComposition(p.to_vec())).collect()
    }

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn multiset_values() {
        assert_eq!(multiset_coeff(3, 2), int(6));
        assert_eq!(multiset_coeff(5, 0), int(1));
        assert_eq!(multiset_coeff(1, 3), int(1));
        assert_eq!(multiset_coeff(0, 1), int(0));
        assert_eq!(multiset_coeff(-2, 0), int(1));
        assert_eq!(multiset_coeff(-2, 3), int(0));
        // binomial(-1, 1) and binomial(-2, 2) as polynomials
        assert_eq!(multiset_coeff(-1, 1), int(-1));
        assert_eq!(multiset_coeff(-3, 2), int(3));
    }

    #[test]
    fn count_needs_signed_multiset_values() {
        // a_2 = 0 < in_G(2) = 1; the (1,1) term contributes <<-1, 1>> = -1
        let g = DirectedMultigraph::on_vertices(3, &[(1, 2), (1, 2), (2, 3), (2, 3)]).unwrap();
        let a = NetflowVector::from_supplies(&[0, 0]);
        assert_eq!(lidskii_count(&g, &a).unwrap(), big(1));
        let a = NetflowVector::from_supplies(&[1, 0]);
        assert_eq!(lidskii_count(&g, &a).unwrap(), big(4));
    }

    #[test]
    fn rising_values() {
        assert_eq!(rising_factorial_over_fact(1, 2), BigInt::from(1));
        assert_eq!(rising_factorial_over_fact(3, 3), BigInt::from(10));
        for c in -3..5 {
            assert_eq!(rising_factorial_over_fact(c, 0), BigInt::one());
        }
        assert_eq!(rising_factorial_over_fact(0, 4), BigInt::zero());
        assert_eq!(rising_factorial_over_fact(-2, 1), BigInt::from(-2));
    }

    #[test]
    fn rising_matches_multiset() {
        for c in -20..=20i64 {
            for j in 0..=20u64 {
                assert_eq!(
                    rising_factorial_over_fact(c, j),
                    multiset_coeff(c, j),
                    "c={c} j={j}"
                );
            }
        }
    }

    #[test]
    fn compositions_examples() {
        assert_eq!(
            dominant_compositions(3, &[2, 1, 0]).unwrap(),
            comps(&[&[2, 1, 0], &[3, 0, 0]])
        );
        assert_eq!(dominant_compositions(0, &[0, 0, 0]).unwrap(), comps(&[&[0, 0, 0]]));
        assert_eq!(
            dominant_compositions(2, &[1, 1]).unwrap(),
            comps(&[&[1, 1], &[2, 0]])
        );
        assert!(dominant_compositions(3, &[1, 1]).is_err());
    }

    #[test]
    fn compositions_closed_under_dominance() {
        // brute force over all weak compositions of 4 into 3 parts
        let lower = [1i64, 2, 1];
        let got = dominant_compositions(4, &lower).unwrap();
        let mut want = Vec::new();
        for a in 0..=4u64 {
            for b in 0..=4 - a {
                let w = WeakComposition(vec![a, b, 4 - a - b]);
                if w.dominates(&lower) {
                    want.push(w);
                }
            }
        }
        assert_eq!(got, want);
    }

    #[test]
    fn k4_volume() {
        let k4 = DirectedMultigraph::complete(4);
        assert_eq!(lidskii_volume(&k4, &NetflowVector::from_supplies(&[1, 0, 0])).unwrap(), big(1));
        assert_eq!(lidskii_volume(&k4, &NetflowVector::from_supplies(&[1, 1, 0])).unwrap(), big(4));
    }

    #[test]
    fn k4_count() {
        let k4 = DirectedMultigraph::complete(4);
        assert_eq!(lidskii_count(&k4, &NetflowVector::from_supplies(&[1, 0, 0])).unwrap(), big(4));
        assert_eq!(lidskii_count(&k4, &NetflowVector::from_supplies(&[0, 1, 2])).unwrap(), big(2));
    }

    #[test]
    fn k4_c_form() {
        let k4 = DirectedMultigraph::complete(4);
        assert_eq!(lidskii_count_c_form(&k4, &[1, 1, 1]).unwrap(), big(2));
        assert_eq!(lidskii_count_c_form(&k4, &[3, 2, 2]).unwrap(), big(22));
        let exp = LidskiiExpansion::new(&k4).unwrap();
        assert_eq!(exp.netflow_for_c(&[3, 2, 2]).entries(), &[2, 2, 3, -7]);
        assert!(exp.count_c_form(&[1, 0, 1]).is_err());
    }

    #[test]
    fn path_graph() {
        let p = DirectedMultigraph::path(3);
        for (a1, a2) in [(0, 0), (2, 5), (3, 1)] {
            let a = NetflowVector::from_supplies(&[a1, a2]);
            assert_eq!(lidskii_count(&p, &a).unwrap(), big(1));
        }
        assert_eq!(lidskii_volume(&p, &NetflowVector::from_supplies(&[2, 3])).unwrap(), big(1));
        assert_eq!(lidskii_count_c_form(&p, &[5, 7]).unwrap(), big(1));
    }

    #[test]
    fn precondition_errors_name_vertex() {
        let g = DirectedMultigraph::on_vertices(4, &[(1, 2), (1, 4), (3, 4)]).unwrap();
        assert_eq!(
            LidskiiExpansion::new(&g).unwrap_err(),
            Error::Precondition {
                vertex: 2,
                reason: "non-sink vertex has no outgoing edge".into()
            }
        );
        let k4 = DirectedMultigraph::complete(4);
        let err = lidskii_count(&k4, &NetflowVector::new(vec![1, -2, 0, 1]).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Precondition { vertex: 2, .. }));
        let g = DirectedMultigraph::on_vertices(4, &[(1, 2), (3, 4)]).unwrap();
        assert_eq!(LidskiiExpansion::new(&g).unwrap_err(), Error::Disconnected);
    }
}
