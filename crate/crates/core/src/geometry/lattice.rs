//! Integral kernel bases and lattice-normalized simplex determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::DirectedMultigraph;

/// Exact determinant: fraction-free Bareiss elimination in checked `i128`,
/// redone over `BigInt` if anything overflows.
pub fn determinant(m: &[Vec<i64>]) -> BigInt {
    match bareiss_i128(m) {
        Some(d) => BigInt::from(d),
        None => bareiss_big(m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()),
    }
}

fn bareiss_i128(m: &[Vec<i64>]) -> Option<i128> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return Some(0);
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    Some(if n == 0 { 1 } else { sign * a[n - 1][n - 1] })
}

fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = if n == 0 { BigInt::one() } else { a[n - 1][n - 1].clone() };
    if negate {
        -d
    } else {
        d
    }
}

/// Solves the square system `m x = rhs` over the rationals; `None` if `m` is
/// singular.
pub fn solve_rational(mut m: Vec<Vec<BigRational>>, mut rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, pivot);
        rhs.swap(k, pivot);
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] / &m[k][k];
            for j in k..n {
                let delta = &factor * &m[k][j];
                m[i][j] -= delta;
            }
            let delta = &factor * &rhs[k];
            rhs[i] -= delta;
        }
    }
    Some((0..n).map(|k| &rhs[k] / &m[k][k]).collect())
}

/// A basis of the lattice `ker(A) ∩ Z^E`, i.e. the lattice of integer
/// directions in the affine span of a flow polytope, together with a
/// certificate for measuring simplices against it: rows `R` on which the
/// basis restricts to a nonsingular square matrix, and that minor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    constraints: Vec<Vec<i64>>,
    ambient: usize,
    basis: Vec<Vec<i64>>,
    rows: Vec<usize>,
    minor: BigInt,
}

impl LatticeBasis {
    /// Integer column reduction of `A` (Euclid on each row, tracking the
    /// unimodular transform `U`); the columns of `U` past the pivots span
    /// the integer kernel.
    pub fn kernel_of(constraints: &[Vec<i64>], ambient: usize) -> Result<Self> {
        if let Some(row) = constraints.iter().find(|r| r.len() != ambient) {
            return Err(Error::DimensionMismatch(format!(
                "constraint row of length {}, expected {ambient}",
                row.len()
            )));
        }
        // column j: (A e_j transformed, U e_j)
        let mut cols: Vec<(Vec<BigInt>, Vec<BigInt>)> = (0..ambient)
            .map(|j| {
                let a = constraints.iter().map(|r| BigInt::from(r[j])).collect();
                let mut u = vec![BigInt::zero(); ambient];
                u[j] = BigInt::one();
                (a, u)
            })
            .collect();
        let mut k = 0;
        for row in 0..constraints.len() {
            loop {
                let Some(best) = (k..ambient)
                    .filter(|&j| !cols[j].0[row].is_zero())
                    .min_by_key(|&j| cols[j].0[row].abs())
                else {
                    break;
                };
                cols.swap(k, best);
                let mut clean = true;
                for j in k + 1..ambient {
                    if cols[j].0[row].is_zero() {
                        continue;
                    }
                    let q = cols[j].0[row].div_floor(&cols[k].0[row]);
                    let (head, tail) = cols.split_at_mut(j);
                    let pivot = &head[k];
                    let target = &mut tail[0];
                    for (x, y) in target.0.iter_mut().zip(&pivot.0) {
                        *x -= &q * y;
                    }
                    for (x, y) in target.1.iter_mut().zip(&pivot.1) {
                        *x -= &q * y;
                    }
                    clean &= target.0[row].is_zero();
                }
                if clean {
                    break;
                }
            }
            if k < ambient && !cols[k].0[row].is_zero() {
                k += 1;
            }
        }
        let basis = cols[k..]
            .iter()
            .map(|(_, u)| {
                u.iter()
                    .map(|x| {
                        x.to_i64()
                            .ok_or_else(|| Error::DimensionMismatch(format!("kernel entry {x} overflows")))
                    })
                    .collect::<Result<Vec<i64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let rows = independent_rows(&basis, ambient);
        let minor = determinant(&restrict(&basis, &rows));
        debug_assert!(!minor.is_zero());
        Ok(LatticeBasis {
            constraints: constraints.to_vec(),
            ambient,
            basis,
            rows,
            minor,
        })
    }

    /// The lattice of integer flow directions of `g`: `ker(M_G) ∩ Z^E`.
    pub fn for_graph(g: &DirectedMultigraph) -> Result<Self> {
        Self::kernel_of(&g.incidence_matrix(), g.edge_count())
    }

    /// `Z^d` itself.
    pub fn standard(d: usize) -> Self {
        Self::kernel_of(&[], d).expect("no constraints")
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dimension(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// Coordinates on which the basis is nonsingular.
    pub fn pivot_rows(&self) -> &[usize] {
        &self.rows
    }

    /// Edge-difference matrix `v_k - v_0` of a would-be simplex, restricted to
    /// the pivot rows (one column per difference), after checking that the
    /// vertex count and every difference fit the lattice's span.
    fn difference_minor(&self, vertices: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
        let d = self.dimension();
        if vertices.len() != d + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} vertices for a {d}-dimensional lattice",
                vertices.len()
            )));
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != self.ambient) {
            return Err(Error::DimensionMismatch(format!(
                "vertex of length {}, expected {}",
                v.len(),
                self.ambient
            )));
        }
        let v0 = &vertices[0];
        for v in &vertices[1..] {
            for row in &self.constraints {
                let dot: i64 = row.iter().zip(v.iter().zip(v0)).map(|(a, (x, y))| a * (x - y)).sum();
                if dot != 0 {
                    return Err(Error::DimensionMismatch(format!(
                        "vertex {v:?} is not in the affine span through {v0:?}"
                    )));
                }
            }
        }
        Ok(self
            .rows
            .iter()
            .map(|&r| vertices[1..].iter().map(|v| v[r] - v0[r]).collect())
            .collect())
    }

    /// `d!` times the volume of the simplex measured in this lattice (up to
    /// sign): the determinant of the edge differences in lattice coordinates.
    pub fn simplex_determinant(&self, vertices: &[Vec<i64>]) -> Result<BigInt> {
        let minor = determinant(&self.difference_minor(vertices)?);
        let (q, r) = minor.div_rem(&self.minor);
        if !r.is_zero() {
            return Err(Error::DimensionMismatch(format!(
                "edge differences are not lattice vectors (minor {minor} vs {})",
                self.minor
            )));
        }
        Ok(q)
    }

    /// Full-dimensional with normalized volume 1.
    pub fn is_unimodular(&self, vertices: &[Vec<i64>]) -> Result<bool> {
        Ok(self.simplex_determinant(vertices)?.abs().is_one())
    }

    /// Barycentric coordinates of `point` with respect to a full-dimensional
    /// simplex in this span; `None` for a degenerate simplex.
    pub fn barycentric(&self, simplex: &[Vec<i64>], point: &[BigRational]) -> Result<Option<Vec<BigRational>>> {
        let m = self.difference_minor(simplex)?;
        if point.len() != self.ambient {
            return Err(Error::DimensionMismatch(format!(
                "point of length {}, expected {}",
                point.len(),
                self.ambient
            )));
        }
        let to_q = |x: i64| BigRational::from_integer(x.into());
        let m: Vec<Vec<BigRational>> = m.into_iter().map(|r| r.into_iter().map(to_q).collect()).collect();
        let rhs = self.rows.iter().map(|&r| &point[r] - to_q(simplex[0][r])).collect();
        Ok(solve_rational(m, rhs).map(|lambda| {
            let rest: BigRational = lambda.iter().sum();
            let mut coords = vec![BigRational::one() - rest];
            coords.extend(lambda);
            coords
        }))
    }
}

fn restrict(basis: &[Vec<i64>], rows: &[usize]) -> Vec<Vec<i64>> {
    rows.iter().map(|&r| basis.iter().map(|b| b[r]).collect()).collect()
}

/// Greedy choice of `basis.len()` coordinates whose restriction is nonsingular.
fn independent_rows(basis: &[Vec<i64>], ambient: usize) -> Vec<usize> {
    let d = basis.len();
    let mut chosen = Vec::with_capacity(d);
    // echelon form of the chosen rows, each with its pivot column
    let mut echelon: Vec<(usize, Vec<BigRational>)> = Vec::new();
    for r in 0..ambient {
        if chosen.len() == d {
            break;
        }
        let mut v: Vec<BigRational> = basis.iter().map(|b| BigRational::from_integer(b[r].into())).collect();
        for (pivot, row) in &echelon {
            if !v[*pivot].is_zero() {
                let factor = &v[*pivot] / &row[*pivot];
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &factor * y;
                }
            }
        }
        if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
            echelon.push((pivot, v));
            chosen.push(r);
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[]), BigInt::one());
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), BigInt::from(-1));
        assert_eq!(determinant(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 1]]), BigInt::from(0));
        assert_eq!(determinant(&[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]), BigInt::from(6));
        // overflows i128 and falls back
        let big = i64::MAX / 2;
        let m = vec![vec![big, 1, 0], vec![1, big, 1], vec![0, 1, big]];
        let expect = BigInt::from(big).pow(3) - BigInt::from(2) * BigInt::from(big);
        assert_eq!(determinant(&m), expect);
    }

    #[test]
    fn standard_lattice() {
        let z3 = LatticeBasis::standard(3);
        assert_eq!(z3.dimension(), 3);
        let simplex = vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert!(z3.is_unimodular(&simplex).unwrap());
        let z1 = LatticeBasis::standard(1);
        assert!(!z1.is_unimodular(&[vec![0], vec![2]]).unwrap());
        assert_eq!(z1.simplex_determinant(&[vec![0], vec![2]]).unwrap(), BigInt::from(2));
        assert!(z1.is_unimodular(&[vec![0]]).is_err());
    }

    #[test]
    fn k4_kernel() {
        let k4 = DirectedMultigraph::complete(4);
        let lat = LatticeBasis::for_graph(&k4).unwrap();
        assert_eq!(lat.dimension(), 3);
        let m = k4.incidence_matrix();
        for b in lat.basis() {
            assert!(m.iter().all(|row| row.iter().zip(b).map(|(a, x)| a * x).sum::<i64>() == 0));
        }
        // the four 1 -> 4 path flows form a unimodular simplex
        let paths = vec![
            vec![1, 0, 0, 1, 0, 1],
            vec![1, 0, 0, 0, 1, 0],
            vec![0, 1, 0, 0, 0, 1],
            vec![0, 0, 1, 0, 0, 0],
        ];
        assert!(lat.is_unimodular(&paths).unwrap());
        // out of span
        let bad = vec![vec![0; 6], vec![1, 0, 0, 0, 0, 0], paths[2].clone(), paths[3].clone()];
        assert!(matches!(lat.is_unimodular(&bad), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn kernel_of_nonunimodular_constraints() {
        // x + 2y + 3z = 0: integer kernel has index 1 in Z^3 ∩ plane
        let lat = LatticeBasis::kernel_of(&[vec![1, 2, 3]], 3).unwrap();
        assert_eq!(lat.dimension(), 2);
        let v = vec![vec![0, 0, 0], vec![-2, 1, 0], vec![-3, 0, 1]];
        assert!(lat.is_unimodular(&v).unwrap());
        let doubled = vec![vec![0, 0, 0], vec![-4, 2, 0], vec![-3, 0, 1]];
        assert_eq!(lat.simplex_determinant(&doubled).unwrap().abs(), BigInt::from(2));
    }

    #[test]
    fn barycentric_coordinates() {
        let z2 = LatticeBasis::standard(2);
        let tri = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let coords = z2.barycentric(&tri, &[q(1, 3), q(1, 3)]).unwrap().unwrap();
        assert_eq!(coords, vec![q(1, 3), q(1, 3), q(1, 3)]);
        let flat = vec![vec![0, 0], vec![1, 1], vec![2, 2]];
        assert_eq!(z2.barycentric(&flat, &[q(0, 1), q(0, 1)]).unwrap(), None);
    }
}
