//! Exact scalar types.
//!
//! Every algorithm in the crate is generic over an integer ring `Z`; rational
//! quantities are `Ratio<Z>`. Arbitrary precision (`BigInt`) is the default
//! through the aliases at the crate root, while fixed-width integers (`i64`,
//! `i128`) work for small inputs where overflow is not a concern.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;

/// Integer ring the lattice lives over.
pub trait LatticeInt:
    Integer + Signed + Clone + Hash + Debug + Display + FromStr + From<i32> + Send + Sync + 'static
{
    /// Embeds a machine integer.
    fn from_i64(v: i64) -> Self;
}

impl LatticeInt for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
}

impl LatticeInt for i128 {
    fn from_i64(v: i64) -> Self {
        v as i128
    }
}

impl LatticeInt for num_bigint::BigInt {
    fn from_i64(v: i64) -> Self {
        num_bigint::BigInt::from(v)
    }
}

/// Exact rational over `Z`.
pub type Q<Z> = Ratio<Z>;

#[cfg(test)]
fn rat<Z: LatticeInt>(v: i64) -> Q<Z> {
    Q::from_integer(Z::from_i64(v))
}

#[cfg(test)]
fn frac<Z: LatticeInt>(n: i64, d: i64) -> Q<Z> {
    Q::new(Z::from_i64(n), Z::from_i64(d))
}

/// Prints `p/q` in lowest terms, integers without `/1`.
pub fn fmt_q<Z: LatticeInt>(q: &Q<Z>) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q`, `p`, or `-p/q`.
pub fn parse_q<Z: LatticeInt>(s: &str) -> Option<Q<Z>> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = n.trim().parse::<Z>().ok()?;
            let d = d.trim().parse::<Z>().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => s.parse::<Z>().ok().map(Q::from_integer),
    }
}

pub(crate) fn lcm_denominators<'a, Z: LatticeInt + 'a>(
    it: impl IntoIterator<Item = &'a Q<Z>>,
) -> Z {
    it.into_iter().fold(Z::one(), |acc, q| acc.lcm(q.denom()))
}
