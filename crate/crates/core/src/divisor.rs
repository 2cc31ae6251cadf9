//! Torus-invariant divisors, linear equivalence and Q-Cartier data.
//!
//! A divisor `D = sum a_r D_r` carries local data `m_sigma` on each maximal
//! cone with `<m_sigma, u_r> = -a_r` for the rays of `sigma`. For `K` (all
//! `a_r = -1`) the data satisfies `<m_sigma, u_r> = 1`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{rank, solve_consistent, solve_square, LatticePoint, RationalVector};
use crate::scalar::{fmt_q, lcm_denominators, LatticeInt, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusDivisor<Z: LatticeInt> {
    coeffs: Vec<Q<Z>>,
}

impl<Z: LatticeInt> TorusDivisor<Z> {
    pub fn new(coeffs: Vec<Q<Z>>) -> Self {
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Q::from_integer(Z::from_i64(c)))
                .collect(),
        )
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![Q::zero(); n])
    }

    /// The prime divisor of ray `i`.
    pub fn prime(n: usize, i: usize) -> Self {
        let mut d = Self::zero(n);
        d.coeffs[i] = Q::from_integer(Z::one());
        d
    }

    pub fn coeffs(&self) -> &[Q<Z>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Q<Z> {
        &self.coeffs[i]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &Q<Z>) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.len(),
            });
        }
        Ok(())
    }
}

impl<Z: LatticeInt> Add for &TorusDivisor<Z> {
    type Output = TorusDivisor<Z>;
    fn add(self, rhs: Self) -> TorusDivisor<Z> {
        assert_eq!(self.len(), rhs.len(), "divisors on different fans");
        TorusDivisor::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl<Z: LatticeInt> Sub for &TorusDivisor<Z> {
    type Output = TorusDivisor<Z>;
    fn sub(self, rhs: Self) -> TorusDivisor<Z> {
        assert_eq!(self.len(), rhs.len(), "divisors on different fans");
        TorusDivisor::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl<Z: LatticeInt> Neg for &TorusDivisor<Z> {
    type Output = TorusDivisor<Z>;
    fn neg(self) -> TorusDivisor<Z> {
        TorusDivisor::new(self.coeffs.iter().map(|a| -a).collect())
    }
}

impl<Z: LatticeInt> fmt::Display for TorusDivisor<Z> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(fmt_q).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Per-cone local data of a Q-Cartier divisor, indexed like `Fan::cones`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartierData<Z: LatticeInt> {
    pub local: Vec<RationalVector<Z>>,
}

impl<Z: LatticeInt> CartierData<Z> {
    pub fn add(&self, other: &Self) -> Self {
        Self {
            local: self
                .local
                .iter()
                .zip(&other.local)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }
}

/// `K = -sum D_r`.
pub fn canonical_divisor<Z: LatticeInt>(f: &Fan<Z>) -> TorusDivisor<Z> {
    TorusDivisor::new(vec![-Q::from_integer(Z::one()); f.num_rays()])
}

pub fn anticanonical_divisor<Z: LatticeInt>(f: &Fan<Z>) -> TorusDivisor<Z> {
    -&canonical_divisor(f)
}

/// `div(chi^m) = sum <m, u_r> D_r`.
pub fn principal_divisor<Z: LatticeInt>(f: &Fan<Z>, m: &LatticePoint<Z>) -> TorusDivisor<Z> {
    TorusDivisor::new(f.rays().iter().map(|u| Q::from_integer(u.dot(m))).collect())
}

pub fn principal_divisor_q<Z: LatticeInt>(f: &Fan<Z>, m: &RationalVector<Z>) -> TorusDivisor<Z> {
    TorusDivisor::new(f.rays().iter().map(|u| u.pair(m)).collect())
}

/// Returns a rational witness `m` with `d1 - d2 = div(m)` when one exists.
pub fn linearly_equivalent<Z: LatticeInt>(
    f: &Fan<Z>,
    d1: &TorusDivisor<Z>,
    d2: &TorusDivisor<Z>,
) -> Result<Option<RationalVector<Z>>> {
    d1.check_len(f.num_rays())?;
    d2.check_len(f.num_rays())?;
    let diff = d1 - d2;
    let a: Vec<Vec<Q<Z>>> = f
        .rays()
        .iter()
        .map(|u| u.0.iter().cloned().map(Q::from_integer).collect())
        .collect();
    Ok(solve_consistent(&a, diff.coeffs())
        .map(|x| RationalVector([x[0].clone(), x[1].clone(), x[2].clone()])))
}

/// Rank of the divisor class group: rays minus the rank of the principal map.
pub fn class_group_rank<Z: LatticeInt>(f: &Fan<Z>) -> usize {
    f.num_rays() - rank(&f.ray_matrix())
}

pub fn q_cartier_data<Z: LatticeInt>(f: &Fan<Z>, d: &TorusDivisor<Z>) -> Result<CartierData<Z>> {
    d.check_len(f.num_rays())?;
    let local = f
        .cones()
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let a = c
                .rays
                .iter()
                .map(|&r| f.ray(r).0.iter().cloned().map(Q::from_integer).collect())
                .collect();
            let b = c.rays.iter().map(|&r| -d.coeff(r).clone()).collect();
            solve_square(a, b)
                .map(|x| RationalVector([x[0].clone(), x[1].clone(), x[2].clone()]))
                .ok_or(Error::DegenerateCone(ci))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CartierData { local })
}

/// Smallest positive `k` with `kD` Cartier.
pub fn cartier_index<Z: LatticeInt>(f: &Fan<Z>, d: &TorusDivisor<Z>) -> Result<Z> {
    let data = q_cartier_data(f, d)?;
    Ok(lcm_denominators(data.local.iter().flat_map(|m| m.0.iter())))
}
