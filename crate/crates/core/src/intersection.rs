//! Curve classes from wall relations, the Mori cone and the nef cone.
//!
//! For a wall `tau` between `sigma_a = tau + u_a` and `sigma_b = tau + u_b`
//! the circuit is rescaled so the off-wall coefficients are
//! `mult(sigma_b)` and `mult(sigma_a)`. Every ray of the circuit then has
//! `D_r . V(tau) = b_r mult(tau) / (mult(sigma_a) mult(sigma_b))`, and all
//! other rays pair to zero. In particular `D_{u_a} . V(tau) = mult(tau) /
//! mult(sigma_a)`.
//!
//! Numerical classes live in `ker(Q^n -> Q^3)`, the space of relations among
//! the rays. The basis has one vector per non-pivot column of the ray matrix,
//! which makes reduced coordinates reproducible.

use num_traits::{Signed, Zero};

use crate::divisor::TorusDivisor;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{kernel, primitive_rational, rank, rref};
use crate::scalar::{lcm_denominators, LatticeInt, Q};

/// Largest Picard rank handled by the exhaustive facet enumeration.
pub const MAX_PICARD_RANK: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveClass<Z: LatticeInt> {
    /// Index into `Fan::walls`.
    pub wall: usize,
    /// `D_r . C` for every ray `r`.
    pub profile: Vec<Q<Z>>,
    /// Coordinates in the basis of the numerical class space.
    pub reduced: Vec<Q<Z>>,
}

/// Basis of the space of numerical curve classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassSpace<Z: LatticeInt> {
    basis: Vec<Vec<Q<Z>>>,
    free: Vec<usize>,
}

impl<Z: LatticeInt> ClassSpace<Z> {
    pub fn new(f: &Fan<Z>) -> Self {
        let m = f.ray_matrix();
        let mut r = m.clone();
        let pivots = rref(&mut r);
        let free: Vec<usize> = (0..f.num_rays()).filter(|c| !pivots.contains(c)).collect();
        let basis = kernel(&m, f.num_rays());
        Self { basis, free }
    }

    /// Picard rank.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Q<Z>>] {
        &self.basis
    }

    /// Coordinates of a relation vector (e.g. a curve profile).
    pub fn curve_coords(&self, profile: &[Q<Z>]) -> Vec<Q<Z>> {
        self.basis
            .iter()
            .zip(&self.free)
            .map(|(k, &f)| &profile[f] / &k[f])
            .collect()
    }

    /// Class of a divisor as a functional on the basis; pairing with curve
    /// coordinates is the plain dot product.
    pub fn divisor_coords(&self, d: &TorusDivisor<Z>) -> Vec<Q<Z>> {
        self.basis
            .iter()
            .map(|k| k.iter().zip(d.coeffs()).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// A torus-invariant representative supported on the non-pivot rays.
    pub fn divisor_from_coords(&self, coords: &[Q<Z>], n: usize) -> TorusDivisor<Z> {
        let mut c = vec![Q::zero(); n];
        for ((k, &f), x) in self.basis.iter().zip(&self.free).zip(coords) {
            c[f] = x / &k[f];
        }
        TorusDivisor::new(c)
    }
}

pub fn pair<Z: LatticeInt>(a: &[Q<Z>], b: &[Q<Z>]) -> Q<Z> {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Intersection profile of the torus-invariant curve of wall `w`.
pub fn curve_class<Z: LatticeInt>(f: &Fan<Z>, w: usize) -> Result<CurveClass<Z>> {
    let space = ClassSpace::new(f);
    curve_class_in(f, &space, w)
}

fn curve_class_in<Z: LatticeInt>(
    f: &Fan<Z>,
    space: &ClassSpace<Z>,
    w: usize,
) -> Result<CurveClass<Z>> {
    let walls = f.walls()?;
    let wall = walls
        .get(w)
        .ok_or_else(|| Error::NoSuchWall(format!("index {w}")))?;
    let cones = f.cones();
    let mult_a = Q::from_integer(cones[wall.side_a].multiplicity.clone());
    let mult_b = Q::from_integer(cones[wall.side_b].multiplicity.clone());
    let scale = &mult_b / Q::from_integer(wall.relation[0].clone());
    debug_assert_eq!(&scale * Q::from_integer(wall.relation[1].clone()), mult_a);
    let unit = Q::from_integer(wall.multiplicity.clone()) / (&mult_a * &mult_b);
    let mut profile = vec![Q::zero(); f.num_rays()];
    for (r, c) in wall.circuit_rays().iter().zip(&wall.relation) {
        profile[*r] = &scale * Q::from_integer(c.clone()) * &unit;
    }
    let reduced = space.curve_coords(&profile);
    Ok(CurveClass {
        wall: w,
        profile,
        reduced,
    })
}

/// Classes of every wall, in wall order.
pub fn all_curve_classes<Z: LatticeInt>(f: &Fan<Z>) -> Result<Vec<CurveClass<Z>>> {
    let space = ClassSpace::new(f);
    (0..f.walls()?.len())
        .map(|w| curve_class_in(f, &space, w))
        .collect()
}

pub fn dot<Z: LatticeInt>(d: &TorusDivisor<Z>, c: &CurveClass<Z>) -> Result<Q<Z>> {
    d.check_len(c.profile.len())?;
    Ok(pair(d.coeffs(), &c.profile))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoriRay<Z: LatticeInt> {
    /// Primitive integral generator in reduced coordinates.
    pub generator: Vec<Q<Z>>,
    /// Walls whose class lies on this ray.
    pub walls: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct MoriCone<Z: LatticeInt> {
    pub rays: Vec<MoriRay<Z>>,
    pub classes: Vec<CurveClass<Z>>,
    pub space: ClassSpace<Z>,
    /// Inward facet normals in divisor coordinates (the nef cone generators).
    pub facets: Vec<Vec<Q<Z>>>,
}

impl<Z: LatticeInt> MoriCone<Z> {
    /// Index of the extremal ray carrying wall `w`.
    pub fn ray_of_wall(&self, w: usize) -> Option<usize> {
        self.rays.iter().position(|r| r.walls.contains(&w))
    }
}

pub fn mori_cone<Z: LatticeInt>(f: &Fan<Z>) -> Result<MoriCone<Z>> {
    let space = ClassSpace::new(f);
    let rho = space.dim();
    if rho == 0 || rho > MAX_PICARD_RANK {
        return Err(Error::BadParameters(format!(
            "Picard rank {rho} outside 1..={MAX_PICARD_RANK}"
        )));
    }
    let classes: Vec<CurveClass<Z>> = (0..f.walls()?.len())
        .map(|w| curve_class_in(f, &space, w))
        .collect::<Result<_>>()?;
    let mut dirs: Vec<Vec<Q<Z>>> = Vec::new();
    for c in &classes {
        if c.reduced.iter().all(Zero::is_zero) {
            continue;
        }
        let d = primitive_rational(&c.reduced);
        if !dirs.contains(&d) {
            dirs.push(d);
        }
    }
    if rank(&dirs) < rho {
        return Err(Error::NotProjective);
    }
    let facets = cone_facets(&dirs, rho);
    if facets.is_empty() {
        return Err(Error::NotProjective);
    }
    // pointed iff the sum of facet normals is strictly positive on every direction
    let interior: Vec<Q<Z>> = (0..rho)
        .map(|i| facets.iter().map(|h| h[i].clone()).sum())
        .collect();
    if dirs.iter().any(|d| !pair(d, &interior).is_positive()) {
        return Err(Error::NotProjective);
    }
    let mut extremal: Vec<Vec<Q<Z>>> = dirs
        .iter()
        .filter(|d| {
            if rho == 1 {
                return true;
            }
            let tight: Vec<Vec<Q<Z>>> = facets
                .iter()
                .filter(|h| pair(h, d).is_zero())
                .cloned()
                .collect();
            rank(&tight) == rho - 1
        })
        .cloned()
        .collect();
    extremal.sort();
    let rays = extremal
        .into_iter()
        .map(|g| {
            let walls = classes
                .iter()
                .filter(|c| positively_proportional(&c.reduced, &g))
                .map(|c| c.wall)
                .collect();
            MoriRay {
                generator: g,
                walls,
            }
        })
        .collect();
    Ok(MoriCone {
        rays,
        classes,
        space,
        facets,
    })
}

fn positively_proportional<Z: LatticeInt>(v: &[Q<Z>], dir: &[Q<Z>]) -> bool {
    !v.iter().all(Zero::is_zero) && primitive_rational(v) == dir
}

/// Inward normals of the facets of the full-dimensional cone spanned by
/// `gens` in `Q^dim`, as sorted primitive integral vectors.
pub(crate) fn cone_facets<Z: LatticeInt>(gens: &[Vec<Q<Z>>], dim: usize) -> Vec<Vec<Q<Z>>> {
    if dim == 1 {
        let pos = gens.iter().any(|g| g[0].is_positive());
        let neg = gens.iter().any(|g| g[0].is_negative());
        return match (pos, neg) {
            (true, false) => vec![vec![Q::from_integer(Z::one())]],
            (false, true) => vec![vec![-Q::from_integer(Z::one())]],
            _ => Vec::new(),
        };
    }
    let mut out: Vec<Vec<Q<Z>>> = Vec::new();
    for subset in combinations(gens.len(), dim - 1) {
        let rows: Vec<Vec<Q<Z>>> = subset.iter().map(|&i| gens[i].clone()).collect();
        if rank(&rows) != dim - 1 {
            continue;
        }
        let normal = kernel(&rows, dim).remove(0);
        for h in [normal.clone(), normal.iter().map(|x| -x).collect()] {
            if gens.iter().all(|g| !pair(g, &h).is_negative()) && !out.contains(&h) {
                out.push(h);
            }
        }
    }
    out.sort();
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug)]
pub struct NefCone<Z: LatticeInt> {
    /// Generators in divisor coordinates, sorted.
    pub generators: Vec<Vec<Q<Z>>>,
    /// Torus-invariant representatives of the generators.
    pub divisors: Vec<TorusDivisor<Z>>,
    pub space: ClassSpace<Z>,
}

impl<Z: LatticeInt> NefCone<Z> {
    pub fn is_full_dimensional(&self) -> bool {
        rank(&self.generators) == self.space.dim()
    }
}

/// Dual of the Mori cone.
pub fn nef_cone<Z: LatticeInt>(f: &Fan<Z>) -> Result<NefCone<Z>> {
    let mori = mori_cone(f)?;
    nef_cone_of(f, &mori)
}

pub fn nef_cone_of<Z: LatticeInt>(f: &Fan<Z>, mori: &MoriCone<Z>) -> Result<NefCone<Z>> {
    let mut pairs: Vec<(Vec<Q<Z>>, TorusDivisor<Z>)> = mori
        .facets
        .iter()
        .map(|g| {
            let d = primitive_divisor(&mori.space.divisor_from_coords(g, f.num_rays()));
            (mori.space.divisor_coords(&d), d)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    let (generators, divisors) = pairs.into_iter().unzip();
    Ok(NefCone {
        generators,
        divisors,
        space: mori.space.clone(),
    })
}

/// Positive rescaling with coprime integer coefficients.
fn primitive_divisor<Z: LatticeInt>(d: &TorusDivisor<Z>) -> TorusDivisor<Z> {
    let l = lcm_denominators(d.coeffs());
    let ints: Vec<Z> = d
        .coeffs()
        .iter()
        .map(|c| (c * Q::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(Z::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return d.clone();
    }
    TorusDivisor::new(
        ints.into_iter()
            .map(|x| Q::from_integer(x / g.clone()))
            .collect(),
    )
}

/// Nonnegative on every torus-invariant curve.
pub fn is_nef<Z: LatticeInt>(f: &Fan<Z>, d: &TorusDivisor<Z>) -> Result<bool> {
    d.check_len(f.num_rays())?;
    for c in all_curve_classes(f)? {
        if dot(d, &c)?.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::{anticanonical_divisor, principal_divisor};
    use crate::fan::{bundle_over_p1, bundle_over_p2, flip_at, projective_space};
    use crate::lattice::LatticePoint;
    use num_bigint::BigInt;

    type QB = Q<BigInt>;

    fn q(n: i64, d: i64) -> QB {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn p3_lines() {
        let f = projective_space::<BigInt>();
        for c in all_curve_classes(&f).unwrap() {
            let nonzero: Vec<&QB> = c.profile.iter().filter(|x| !x.is_zero()).collect();
            assert_eq!(nonzero.len(), 4);
            assert!(nonzero.iter().all(|x| **x == q(1, 1)));
        }
        let m = mori_cone(&f).unwrap();
        assert_eq!(m.rays.len(), 1);
        assert_eq!(m.rays[0].walls.len(), 6);
    }

    #[test]
    fn flipped_curve_profile() {
        let (a, b) = (6, 4);
        let f = flip_at(&bundle_over_p1::<BigInt>(a, b).unwrap(), 1, 2).unwrap();
        let w = f.find_wall(3, 4).unwrap();
        let c = curve_class(&f, w).unwrap();
        // gcd(6,4) = 2
        assert_eq!(
            c.profile,
            vec![q(0, 1), q(2, 4), q(2, 6), q(-2, 24), q(-2, 24)]
        );
        let minus_k = anticanonical_divisor(&f);
        assert_eq!(dot(&minus_k, &c).unwrap(), q(2 * (a + b - 2), a * b));
    }

    #[test]
    fn numerical_triviality_on_fixtures() {
        let fans = vec![
            projective_space::<BigInt>(),
            bundle_over_p1(5, 3).unwrap(),
            flip_at(&bundle_over_p1(5, 3).unwrap(), 1, 2).unwrap(),
            bundle_over_p2(3).unwrap(),
        ];
        for f in fans {
            for c in all_curve_classes(&f).unwrap() {
                for m in [[1, 0, 0], [0, 1, 0], [0, 0, 1], [3, -7, 2]] {
                    let p = principal_divisor(&f, &LatticePoint::from_i64(m));
                    assert!(dot(&p, &c).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn bundle_cones() {
        let f = bundle_over_p1::<BigInt>(6, 5).unwrap();
        let m = mori_cone(&f).unwrap();
        assert_eq!(m.rays.len(), 2);
        let nef = nef_cone_of(&f, &m).unwrap();
        assert_eq!(nef.generators.len(), 2);
        assert!(nef.is_full_dimensional());
        for r in &m.rays {
            let pairings: Vec<QB> = nef
                .generators
                .iter()
                .map(|g| pair(g, &r.generator))
                .collect();
            assert!(pairings.iter().all(|p| !p.is_negative()));
            assert!(pairings.iter().any(Zero::is_zero));
        }
        assert!(!is_nef(&f, &anticanonical_divisor(&f)).unwrap());
        let g = bundle_over_p2::<BigInt>(3).unwrap();
        assert!(is_nef(&g, &anticanonical_divisor(&g)).unwrap());
    }

    #[test]
    fn facets_of_quadrant() {
        let gens = vec![
            vec![q(1, 1), q(0, 1)],
            vec![q(0, 1), q(1, 1)],
            vec![q(1, 1), q(1, 1)],
        ];
        let fac = cone_facets(&gens, 2);
        assert_eq!(fac, vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
        let line = vec![vec![q(1, 1)], vec![q(-1, 1)]];
        assert!(cone_facets(&line, 1).is_empty());
    }
}
