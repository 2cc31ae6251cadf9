//! Discrepancies over lattice points and the terminal/canonical tests.
//!
//! For a primitive `w` in a maximal cone `sigma`, the exceptional divisor of
//! the star subdivision at `w` has discrepancy `<m_sigma(K), w> - 1`, which
//! equals `(sum of barycentric coordinates of w) - 1`.

use num_traits::{One, Signed, Zero};

use crate::divisor::{canonical_divisor, cartier_index, q_cartier_data};
use crate::error::{Error, Result};
use crate::fan::{star_subdivision, Fan};
use crate::intersection::all_curve_classes;
use crate::lattice::LatticePoint;
use crate::scalar::{LatticeInt, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscrepancyReport<Z: LatticeInt> {
    /// Maximal cone used (lowest index among the cones containing the point).
    pub cone: usize,
    /// Rays of the smallest face containing the point.
    pub face: Vec<usize>,
    pub point: LatticePoint<Z>,
    pub value: Q<Z>,
}

/// Outcome of a terminal or canonical test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict<Z: LatticeInt> {
    pub holds: bool,
    /// Lexicographically smallest offending primitive point.
    pub witness: Option<DiscrepancyReport<Z>>,
}

fn check_point<Z: LatticeInt>(w: &LatticePoint<Z>) -> Result<()> {
    if w.is_zero() || !w.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    Ok(())
}

pub fn discrepancy<Z: LatticeInt>(f: &Fan<Z>, w: &LatticePoint<Z>) -> Result<DiscrepancyReport<Z>> {
    check_point(w)?;
    let containing = f.cones_containing(w);
    let (cone, lam) = containing.first().ok_or(Error::OutsideSupport)?;
    let data = q_cartier_data(f, &canonical_divisor(f))?;
    let value = w.pair(&data.local[*cone]) - Q::one();
    for (c, _) in &containing[1..] {
        if w.pair(&data.local[*c]) - Q::one() != value {
            return Err(Error::InconsistentCartierData);
        }
    }
    let face = (0..3)
        .filter(|&k| lam[k].is_positive())
        .map(|k| f.cones()[*cone].rays[k])
        .collect();
    Ok(DiscrepancyReport {
        cone: *cone,
        face,
        point: w.clone(),
        value,
    })
}

/// Independent route: subdivide at `w`, then solve for the coefficient `c`
/// of the new ray in the pullback of `K` from `(pullback) . C = 0` on a curve
/// contracted by the subdivision. The discrepancy is `-1 - c`.
pub fn discrepancy_via_subdivision<Z: LatticeInt>(f: &Fan<Z>, w: &LatticePoint<Z>) -> Result<Q<Z>> {
    check_point(w)?;
    if f.find_ray(w).is_some() {
        return Ok(Q::zero());
    }
    if f.cones_containing(w).is_empty() {
        return Err(Error::OutsideSupport);
    }
    let y = star_subdivision(f, w)?;
    let new = y.num_rays() - 1;
    let walls = y.walls()?;
    let classes = all_curve_classes(&y)?;
    let mut values = Vec::new();
    for (wi, wall) in walls.iter().enumerate() {
        let Some(pos) = wall.rays.iter().position(|&r| r == new) else {
            continue;
        };
        let other = wall.rays[1 - pos];
        // contracted iff the wall's interior lies in the interior of an old 3-cone
        let mid = w + y.ray(other);
        let contracted = f
            .cones_containing(&mid)
            .first()
            .is_some_and(|(_, lam)| lam.iter().all(|l| l.is_positive()));
        if !contracted {
            continue;
        }
        let profile = &classes[wi].profile;
        let old: Q<Z> = profile[..new].iter().cloned().sum();
        let c = old / &profile[new];
        values.push(-Q::one() - c);
    }
    let first = values.first().cloned().ok_or(Error::OutsideSupport)?;
    if values.iter().any(|v| v != &first) {
        return Err(Error::InconsistentCartierData);
    }
    Ok(first)
}

/// Nonzero lattice points of `conv(0, u1, u2, u3)` for cone `c` other than
/// its generators, with their barycentric coordinates.
pub fn simplex_points<Z: LatticeInt>(f: &Fan<Z>, c: usize) -> Vec<(LatticePoint<Z>, [Q<Z>; 3])> {
    let gens = f.cones()[c].rays.map(|r| f.ray(r).clone());
    let bounds: Vec<(Z, Z)> = (0..3)
        .map(|i| {
            let vals = gens.iter().map(|g| g.0[i].clone());
            let lo = vals.clone().fold(Z::zero(), |a, b| a.min(b));
            let hi = vals.fold(Z::zero(), |a, b| a.max(b));
            (lo, hi)
        })
        .collect();
    let mut out = Vec::new();
    let mut x = bounds[0].0.clone();
    while x <= bounds[0].1 {
        let mut y = bounds[1].0.clone();
        while y <= bounds[1].1 {
            let mut z = bounds[2].0.clone();
            while z <= bounds[2].1 {
                let p = LatticePoint::new(x.clone(), y.clone(), z.clone());
                if !p.is_zero() && !gens.contains(&p) {
                    let lam = f.barycentric(c, &p);
                    let sum: Q<Z> = lam.iter().cloned().sum();
                    if lam.iter().all(|l| !l.is_negative()) && sum <= Q::one() {
                        out.push((p, lam));
                    }
                }
                z = z + Z::one();
            }
            y = y + Z::one();
        }
        x = x + Z::one();
    }
    out
}

fn scan<Z: LatticeInt>(f: &Fan<Z>, offends: impl Fn(&Q<Z>) -> bool) -> Result<Verdict<Z>> {
    if !f.is_complete() {
        return Err(Error::NotComplete);
    }
    let mut witness: Option<DiscrepancyReport<Z>> = None;
    for c in 0..f.cones().len() {
        for (p, _) in simplex_points(f, c) {
            if !p.is_primitive() {
                continue;
            }
            let rep = discrepancy(f, &p)?;
            if offends(&rep.value) && witness.as_ref().is_none_or(|w| p < w.point) {
                witness = Some(rep);
            }
        }
    }
    Ok(Verdict {
        holds: witness.is_none(),
        witness,
    })
}

/// Terminal iff every cone's simplex `conv(0, u1, u2, u3)` has no lattice
/// points besides its vertices.
pub fn is_terminal<Z: LatticeInt>(f: &Fan<Z>) -> Result<Verdict<Z>> {
    scan(f, |v| !v.is_positive())
}

/// Canonical iff no nonzero lattice point has `<m_sigma(K), x> < 1`.
pub fn is_canonical<Z: LatticeInt>(f: &Fan<Z>) -> Result<Verdict<Z>> {
    scan(f, |v| v.is_negative())
}

/// Cartier index of `K`.
pub fn gorenstein_index<Z: LatticeInt>(f: &Fan<Z>) -> Result<Z> {
    cartier_index(f, &canonical_divisor(f))
}
