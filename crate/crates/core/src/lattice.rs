//! Exact linear algebra over the rank-3 lattice `N = Z^3` and its rational span.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{fmt_q, LatticeInt, Q};

/// A point of `Z^3`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint<Z>(pub [Z; 3]);

impl<Z: LatticeInt> LatticePoint<Z> {
    pub fn new(x: Z, y: Z, z: Z) -> Self {
        Self([x, y, z])
    }

    pub fn from_i64(c: [i64; 3]) -> Self {
        Self(c.map(Z::from_i64))
    }

    pub fn zero() -> Self {
        Self([Z::zero(), Z::zero(), Z::zero()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Self) -> Z {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Z::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    /// Pairing with a rational functional.
    pub fn pair(&self, m: &RationalVector<Z>) -> Q<Z> {
        self.0
            .iter()
            .zip(&m.0)
            .fold(Q::zero(), |acc, (a, b)| acc + b * a.clone())
    }

    pub fn scale(&self, k: &Z) -> Self {
        Self(self.0.clone().map(|c| c * k.clone()))
    }

    /// Gcd of the coordinates (zero for the zero vector).
    pub fn content(&self) -> Z {
        self.0.iter().fold(Z::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn to_rational(&self) -> RationalVector<Z> {
        RationalVector(self.0.clone().map(Q::from_integer))
    }

    pub fn cross(&self, other: &Self) -> Self {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &other.0;
        Self([
            a1.clone() * b2.clone() - a2.clone() * b1.clone(),
            a2.clone() * b0.clone() - a0.clone() * b2.clone(),
            a0.clone() * b1.clone() - a1.clone() * b0.clone(),
        ])
    }
}

impl<Z: LatticeInt> Add for &LatticePoint<Z> {
    type Output = LatticePoint<Z>;
    fn add(self, rhs: Self) -> LatticePoint<Z> {
        LatticePoint([
            self.0[0].clone() + rhs.0[0].clone(),
            self.0[1].clone() + rhs.0[1].clone(),
            self.0[2].clone() + rhs.0[2].clone(),
        ])
    }
}

impl<Z: LatticeInt> Sub for &LatticePoint<Z> {
    type Output = LatticePoint<Z>;
    fn sub(self, rhs: Self) -> LatticePoint<Z> {
        self + &(-rhs)
    }
}

impl<Z: LatticeInt> Neg for &LatticePoint<Z> {
    type Output = LatticePoint<Z>;
    fn neg(self) -> LatticePoint<Z> {
        LatticePoint(self.0.clone().map(|c| -c))
    }
}

impl<Z: LatticeInt> fmt::Display for LatticePoint<Z> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// A point of `Q^3`, always in lowest terms (guaranteed by `Ratio`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalVector<Z: LatticeInt>(pub [Q<Z>; 3]);

impl<Z: LatticeInt> RationalVector<Z> {
    pub fn zero() -> Self {
        Self([Q::zero(), Q::zero(), Q::zero()])
    }

    pub fn from_fracs(c: [(i64, i64); 3]) -> Self {
        Self(c.map(|(n, d)| Q::new(Z::from_i64(n), Z::from_i64(d))))
    }

    pub fn dot(&self, other: &Self) -> Q<Z> {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self([
            &self.0[0] + &other.0[0],
            &self.0[1] + &other.0[1],
            &self.0[2] + &other.0[2],
        ])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self([
            &self.0[0] - &other.0[0],
            &self.0[1] - &other.0[1],
            &self.0[2] - &other.0[2],
        ])
    }

    pub fn scale(&self, k: &Q<Z>) -> Self {
        Self(self.0.clone().map(|c| c * k))
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }
}

impl<Z: LatticeInt> fmt::Display for RationalVector<Z> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{})",
            fmt_q(&self.0[0]),
            fmt_q(&self.0[1]),
            fmt_q(&self.0[2])
        )
    }
}

/// Small dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix<Z> {
    rows: usize,
    cols: usize,
    entries: Vec<Z>,
}

impl<Z: LatticeInt> IntMatrix<Z> {
    pub fn from_rows(rows: &[LatticePoint<Z>]) -> Self {
        Self {
            rows: rows.len(),
            cols: 3,
            entries: rows.iter().flat_map(|r| r.0.iter().cloned()).collect(),
        }
    }

    pub fn new(rows: usize, cols: usize, entries: Vec<Z>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Z {
        &self.entries[r * self.cols + c]
    }

    fn to_rational_rows(&self) -> Vec<Vec<Q<Z>>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| Q::from_integer(self.get(r, c).clone()))
                    .collect()
            })
            .collect()
    }
}

pub fn det3<Z: LatticeInt>(a: &LatticePoint<Z>, b: &LatticePoint<Z>, c: &LatticePoint<Z>) -> Z {
    a.dot(&b.cross(c))
}

pub fn det3_q<Z: LatticeInt>(
    a: &RationalVector<Z>,
    b: &RationalVector<Z>,
    c: &RationalVector<Z>,
) -> Q<Z> {
    let [a0, a1, a2] = &a.0;
    let [b0, b1, b2] = &b.0;
    let [c0, c1, c2] = &c.0;
    a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0)
}

/// Divides `v` by the gcd of its coordinates.
pub fn primitive<Z: LatticeInt>(v: &LatticePoint<Z>) -> Result<LatticePoint<Z>> {
    let g = v.content();
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(LatticePoint(v.0.clone().map(|c| c / g.clone())))
}

/// Index of the group generated by `gens` inside its saturation, computed as
/// the gcd of all maximal minors of the `d x 3` generator matrix.
pub fn sublattice_index<Z: LatticeInt>(gens: &[LatticePoint<Z>], d: usize) -> Result<Z> {
    if gens.len() != d || !(1..=3).contains(&d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: gens.len(),
        });
    }
    let g = match d {
        1 => gens[0].content(),
        2 => gens[0].cross(&gens[1]).content(),
        _ => det3(&gens[0], &gens[1], &gens[2]).abs(),
    };
    if g.is_zero() {
        Err(Error::DependentGenerators { expected: d })
    } else {
        Ok(g)
    }
}

/// Unique solution of the square system `A x = b`.
pub fn solve_rational<Z: LatticeInt>(
    a: &IntMatrix<Z>,
    b: &RationalVector<Z>,
) -> Result<RationalVector<Z>> {
    if a.rows() != 3 || a.cols() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: a.rows().max(a.cols()),
        });
    }
    let x = solve_square(a.to_rational_rows(), b.0.to_vec()).ok_or(Error::SingularMatrix)?;
    Ok(RationalVector([x[0].clone(), x[1].clone(), x[2].clone()]))
}

/// Gauss-Jordan on a square rational system; `None` when singular.
#[allow(clippy::needless_range_loop)]
pub(crate) fn solve_square<Z: LatticeInt>(
    mut a: Vec<Vec<Q<Z>>>,
    mut b: Vec<Q<Z>>,
) -> Option<Vec<Q<Z>>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for c in col..n {
            a[col][c] = &a[col][c] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..n {
                    let t = &f * &a[col][c];
                    a[r][c] = &a[r][c] - t;
                }
                let t = &f * &b[col];
                b[r] = &b[r] - t;
            }
        }
    }
    Some(b)
}

/// Reduced row echelon form; returns the pivot columns.
#[allow(clippy::needless_range_loop)]
pub(crate) fn rref<Z: LatticeInt>(a: &mut [Vec<Q<Z>>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] = &a[i][j] - t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub(crate) fn rank<Z: LatticeInt>(rows: &[Vec<Q<Z>>]) -> usize {
    let mut a = rows.to_vec();
    rref(&mut a).len()
}

/// Basis of the right kernel of `a` (rows x cols), one vector per free
/// column, scaled to primitive integral vectors. The order follows the free
/// columns so the basis is reproducible.
pub(crate) fn kernel<Z: LatticeInt>(a: &[Vec<Q<Z>>], cols: usize) -> Vec<Vec<Q<Z>>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -m[row][f].clone();
            }
            primitive_rational(&v)
        })
        .collect()
}

/// Rescales a nonzero rational vector to the primitive integral vector with
/// the same direction.
pub(crate) fn primitive_rational<Z: LatticeInt>(v: &[Q<Z>]) -> Vec<Q<Z>> {
    let den = v.iter().fold(Z::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<Z> = v
        .iter()
        .map(|q| (q * Q::from_integer(den.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(Z::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|c| Q::from_integer(c / g.clone()))
        .collect()
}

/// Any solution of the (possibly overdetermined) system `A x = b`.
pub(crate) fn solve_consistent<Z: LatticeInt>(a: &[Vec<Q<Z>>], b: &[Q<Z>]) -> Option<Vec<Q<Z>>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Q<Z>>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = aug[row][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn p(c: [i64; 3]) -> LatticePoint<BigInt> {
        LatticePoint::from_i64(c)
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&p([0, 2, 2])).unwrap(), p([0, 1, 1]));
        assert_eq!(primitive(&p([0, 1, 1])).unwrap(), p([0, 1, 1]));
        assert_eq!(primitive(&p([-3, 12, 3])).unwrap(), p([-1, 4, 1]));
        assert_eq!(primitive(&p([0, 0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn index_examples() {
        let unit = [p([1, 0, 0]), p([0, 1, 0]), p([0, 0, 1])];
        assert_eq!(sublattice_index(&unit, 3).unwrap(), BigInt::from(1));
        let sigma = [p([-1, 6, 5]), p([1, 0, 0]), p([0, 1, 0])];
        assert_eq!(sublattice_index(&sigma, 3).unwrap(), BigInt::from(5));
        let tau = [p([-1, 6, 5]), p([1, 0, 0])];
        assert_eq!(sublattice_index(&tau, 2).unwrap(), BigInt::from(1));
        let tau = [p([-1, 6, 4]), p([1, 0, 0])];
        assert_eq!(sublattice_index(&tau, 2).unwrap(), BigInt::from(2));
        assert_eq!(
            sublattice_index(&[p([1, 2, 3]), p([2, 4, 6])], 2),
            Err(Error::DependentGenerators { expected: 2 })
        );
    }

    #[test]
    fn solve_examples() {
        let id = IntMatrix::from_rows(&[p([1, 0, 0]), p([0, 1, 0]), p([0, 0, 1])]);
        let ones = RationalVector::from_fracs([(1, 1), (1, 1), (1, 1)]);
        assert_eq!(solve_rational(&id, &ones).unwrap(), ones);

        let a = IntMatrix::from_rows(&[p([-1, 5, 3]), p([1, 0, 0]), p([0, 0, 1])]);
        let x = solve_rational(&a, &ones).unwrap();
        assert_eq!(x, RationalVector::from_fracs([(1, 1), (-1, 5), (1, 1)]));

        let sing = IntMatrix::from_rows(&[p([0, -1, -1]), p([0, 1, 0]), p([0, 0, 1])]);
        assert_eq!(solve_rational(&sing, &ones), Err(Error::SingularMatrix));
    }

    #[test]
    fn kernel_and_consistency() {
        // columns e0, e1, e2, v0, v1 of the (6,5) bundle
        let rays = [
            p([0, -1, -1]),
            p([0, 1, 0]),
            p([0, 0, 1]),
            p([-1, 6, 5]),
            p([1, 0, 0]),
        ];
        let rows: Vec<Vec<Q<BigInt>>> = (0..3)
            .map(|i| {
                rays.iter()
                    .map(|r| Q::from_integer(r.0[i].clone()))
                    .collect()
            })
            .collect();
        let ker = kernel(&rows, 5);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            for row in &rows {
                let s: Q<BigInt> = row.iter().zip(k).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
        }
        assert_eq!(rank(&rows), 3);
        let trivial = solve_consistent(&rows, &[Q::zero(), Q::zero(), Q::zero()]);
        assert!(trivial.is_some());
    }
}
