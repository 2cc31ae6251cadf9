//! Complete simplicial fans in `N = Z^3`.
//!
//! A [`Fan`] is validated on construction: rays are normalized to primitive
//! generators, every maximal cone must be a nondegenerate 3-cone, and every
//! pair of cones must meet along a common face. Walls (2-cones shared by two
//! maximal cones) are enumerated once together with their circuit relation.
//! Fans are immutable; [`flip`] and [`star_subdivision`] return new fans.

use std::collections::BTreeMap;

use log::warn;
use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lattice::{det3, primitive, solve_square, sublattice_index, LatticePoint};
use crate::scalar::{LatticeInt, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone<Z> {
    /// Sorted indices into the fan's ray table.
    pub rays: [usize; 3],
    pub multiplicity: Z,
}

impl<Z> Cone<Z> {
    pub fn contains_ray(&self, r: usize) -> bool {
        self.rays.contains(&r)
    }
}

/// A 2-cone shared by two maximal cones.
///
/// `relation` holds the circuit `b_a u_a + b_b u_b + c_0 w_0 + c_1 w_1 = 0`
/// in the order `[off_a, off_b, rays[0], rays[1]]`, with content 1 and both
/// off-wall coefficients positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall<Z> {
    pub rays: [usize; 2],
    pub side_a: usize,
    pub side_b: usize,
    pub off_a: usize,
    pub off_b: usize,
    pub relation: [Z; 4],
    pub multiplicity: Z,
}

impl<Z: LatticeInt> Wall<Z> {
    pub fn circuit_rays(&self) -> [usize; 4] {
        [self.off_a, self.off_b, self.rays[0], self.rays[1]]
    }

    /// Circuit coefficient of ray `r` (zero for rays outside the circuit).
    pub fn coefficient(&self, r: usize) -> Z {
        self.circuit_rays()
            .iter()
            .position(|&x| x == r)
            .map_or_else(Z::zero, |i| self.relation[i].clone())
    }

    /// Counts of strictly positive and strictly negative circuit coefficients.
    pub fn sign_pattern(&self) -> (usize, usize) {
        let pos = self.relation.iter().filter(|c| c.is_positive()).count();
        let neg = self.relation.iter().filter(|c| c.is_negative()).count();
        (pos, neg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan<Z> {
    rays: Vec<LatticePoint<Z>>,
    names: Vec<Option<String>>,
    cones: Vec<Cone<Z>>,
    walls: Vec<Wall<Z>>,
    complete: bool,
}

impl<Z: LatticeInt> Fan<Z> {
    pub fn rays(&self) -> &[LatticePoint<Z>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticePoint<Z> {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn cones(&self) -> &[Cone<Z>] {
        &self.cones
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn is_smooth(&self) -> bool {
        self.cones.iter().all(|c| c.multiplicity.is_one())
    }

    pub fn names(&self) -> &[Option<String>] {
        &self.names
    }

    /// Tag of ray `i`, or `r{i}` when untagged.
    pub fn ray_name(&self, i: usize) -> String {
        self.names[i].clone().unwrap_or_else(|| format!("r{i}"))
    }

    pub fn find_ray(&self, p: &LatticePoint<Z>) -> Option<usize> {
        self.rays.iter().position(|r| r == p)
    }

    /// Looks a ray up by tag, by `r{i}`, or by plain index.
    pub fn find_ray_by_name(&self, name: &str) -> Option<usize> {
        let name = name.trim();
        if let Some(i) = self.names.iter().position(|n| n.as_deref() == Some(name)) {
            return Some(i);
        }
        let idx = name
            .strip_prefix('r')
            .unwrap_or(name)
            .parse::<usize>()
            .ok()?;
        (idx < self.rays.len()).then_some(idx)
    }

    pub fn cone_index(&self, rays: [usize; 3]) -> Option<usize> {
        let mut key = rays;
        key.sort_unstable();
        self.cones.iter().position(|c| c.rays == key)
    }

    /// All walls. Requires a complete fan.
    pub fn walls(&self) -> Result<&[Wall<Z>]> {
        if !self.complete {
            return Err(Error::NotComplete);
        }
        Ok(&self.walls)
    }

    /// Walls of a possibly incomplete fan (interior 2-faces only).
    pub fn interior_walls(&self) -> &[Wall<Z>] {
        &self.walls
    }

    pub fn find_wall(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { [a, b] } else { [b, a] };
        self.walls.iter().position(|w| w.rays == key)
    }

    pub fn wall_label(&self, w: &Wall<Z>) -> String {
        format!(
            "tau({},{})",
            self.ray_name(w.rays[0]),
            self.ray_name(w.rays[1])
        )
    }

    /// The 3 x n ray matrix as rational rows.
    pub(crate) fn ray_matrix(&self) -> Vec<Vec<Q<Z>>> {
        (0..3)
            .map(|i| {
                self.rays
                    .iter()
                    .map(|r| Q::from_integer(r.0[i].clone()))
                    .collect()
            })
            .collect()
    }

    /// Coordinates of `p` in the basis of cone `c`'s generators.
    pub fn barycentric(&self, c: usize, p: &LatticePoint<Z>) -> [Q<Z>; 3] {
        let gens = self.cones[c].rays.map(|i| &self.rays[i]);
        barycentric(gens, p).expect("validated cones are nondegenerate")
    }

    /// Maximal cones containing `p`, with their barycentric coordinates.
    pub fn cones_containing(&self, p: &LatticePoint<Z>) -> Vec<(usize, [Q<Z>; 3])> {
        (0..self.cones.len())
            .filter_map(|c| {
                let lam = self.barycentric(c, p);
                lam.iter().all(|l| !l.is_negative()).then_some((c, lam))
            })
            .collect()
    }
}

fn barycentric<Z: LatticeInt>(
    gens: [&LatticePoint<Z>; 3],
    p: &LatticePoint<Z>,
) -> Option<[Q<Z>; 3]> {
    // columns are the generators
    let a: Vec<Vec<Q<Z>>> = (0..3)
        .map(|i| {
            gens.iter()
                .map(|g| Q::from_integer(g.0[i].clone()))
                .collect()
        })
        .collect();
    let b = p.0.iter().cloned().map(Q::from_integer).collect();
    let x = solve_square(a, b)?;
    Some([x[0].clone(), x[1].clone(), x[2].clone()])
}

/// Validates raw data into a [`Fan`].
///
/// Non-primitive rays are normalized with a warning. `names`, when given, must
/// have one entry per ray.
pub fn make_fan<Z: LatticeInt>(
    rays: Vec<LatticePoint<Z>>,
    max_cones: Vec<Vec<usize>>,
    names: Option<Vec<String>>,
) -> Result<Fan<Z>> {
    let names = match names {
        Some(n) if n.len() != rays.len() => {
            return Err(Error::DimensionMismatch {
                expected: rays.len(),
                got: n.len(),
            })
        }
        Some(n) => n.into_iter().map(Some).collect(),
        None => vec![None; rays.len()],
    };
    build(rays, max_cones, names)
}

fn build<Z: LatticeInt>(
    rays: Vec<LatticePoint<Z>>,
    max_cones: Vec<Vec<usize>>,
    names: Vec<Option<String>>,
) -> Result<Fan<Z>> {
    let mut prim = Vec::with_capacity(rays.len());
    for (i, r) in rays.iter().enumerate() {
        let p = primitive(r).map_err(|_| Error::ZeroRay(i))?;
        if &p != r {
            warn!("ray {i} = {r} is not primitive; using {p}");
        }
        if let Some(j) = prim.iter().position(|q| q == &p) {
            return Err(Error::DuplicateRay(j, i));
        }
        prim.push(p);
    }
    let rays = prim;

    let mut cones = Vec::with_capacity(max_cones.len());
    for (ci, c) in max_cones.iter().enumerate() {
        if c.len() < 3 {
            return Err(Error::NotPure(ci));
        }
        if c.len() > 3 {
            return Err(Error::DegenerateCone(ci));
        }
        for &i in c {
            if i >= rays.len() {
                return Err(Error::RayIndexOutOfRange {
                    index: i,
                    rays: rays.len(),
                });
            }
        }
        let mut key = [c[0], c[1], c[2]];
        key.sort_unstable();
        if key[0] == key[1] || key[1] == key[2] {
            return Err(Error::DegenerateCone(ci));
        }
        let gens = key.map(|i| rays[i].clone());
        let multiplicity = sublattice_index(&gens, 3).map_err(|_| Error::DegenerateCone(ci))?;
        cones.push((
            ci,
            Cone {
                rays: key,
                multiplicity,
            },
        ));
    }
    for (i, (ci, a)) in cones.iter().enumerate() {
        for (cj, b) in &cones[i + 1..] {
            if !meet_properly(&rays, &a.rays, &b.rays) {
                return Err(Error::OverlappingCones(*ci, *cj));
            }
        }
    }
    let mut cones: Vec<Cone<Z>> = cones.into_iter().map(|(_, c)| c).collect();
    cones.sort_by_key(|c| c.rays);

    for r in 0..rays.len() {
        if !cones.iter().any(|c| c.contains_ray(r)) {
            return Err(Error::BadParameters(format!(
                "ray {r} lies in no maximal cone"
            )));
        }
    }

    let mut faces: BTreeMap<[usize; 2], Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, c) in cones.iter().enumerate() {
        for skip in 0..3 {
            let face: Vec<usize> = (0..3).filter(|&k| k != skip).map(|k| c.rays[k]).collect();
            faces
                .entry([face[0], face[1]])
                .or_default()
                .push((ci, c.rays[skip]));
        }
    }
    let complete = !cones.is_empty() && faces.values().all(|v| v.len() == 2);
    let mut walls = Vec::new();
    for (pair, inc) in &faces {
        match inc.as_slice() {
            [(sa, oa), (sb, ob)] => {
                walls.push(make_wall(&rays, &cones, *pair, (*sa, *oa), (*sb, *ob))?)
            }
            [_] => {}
            // three cones on one 2-face cannot meet properly
            _ => return Err(Error::OverlappingCones(inc[0].0, inc[2].0)),
        }
    }
    Ok(Fan {
        rays,
        names,
        cones,
        walls,
        complete,
    })
}

fn make_wall<Z: LatticeInt>(
    rays: &[LatticePoint<Z>],
    cones: &[Cone<Z>],
    pair: [usize; 2],
    (side_a, off_a): (usize, usize),
    (side_b, off_b): (usize, usize),
) -> Result<Wall<Z>> {
    let v = [off_a, off_b, pair[0], pair[1]].map(|i| &rays[i]);
    // Cramer: sum_j (-1)^j det(v without j) v_j = 0
    let mut rel: [Z; 4] = std::array::from_fn(|j| {
        let others: Vec<&LatticePoint<Z>> = (0..4).filter(|&k| k != j).map(|k| v[k]).collect();
        let d = det3(others[0], others[1], others[2]);
        if j % 2 == 0 {
            d
        } else {
            -d
        }
    });
    let g = rel
        .iter()
        .fold(Z::zero(), |g, c| num_integer::Integer::gcd(&g, c));
    if g.is_zero() || rel[0].is_zero() || rel[1].is_zero() {
        return Err(Error::DegenerateCone(side_a));
    }
    if rel[0].is_negative() {
        g_neg(&mut rel);
    }
    if !rel[1].is_positive() {
        // off-wall rays on the same side of the wall
        return Err(Error::OverlappingCones(side_a, side_b));
    }
    let rel = rel.map(|c| c / g.clone());
    let multiplicity = sublattice_index(&[rays[pair[0]].clone(), rays[pair[1]].clone()], 2)?;
    debug_assert!(cones[side_a].contains_ray(off_a) && cones[side_b].contains_ray(off_b));
    Ok(Wall {
        rays: pair,
        side_a,
        side_b,
        off_a,
        off_b,
        relation: rel,
        multiplicity,
    })
}

fn g_neg<Z: LatticeInt>(rel: &mut [Z; 4]) {
    for c in rel.iter_mut() {
        *c = -c.clone();
    }
}

/// True when the two simplicial cones intersect exactly in the cone over
/// their shared rays: there is a linear functional vanishing on the shared
/// rays, positive on the rest of `a` and negative on the rest of `b`.
///
/// The feasible functionals form a pointed cone whose extreme rays are
/// orthogonal to two of the generators, so summing all feasible candidates
/// `x × y` lands in its relative interior.
fn meet_properly<Z: LatticeInt>(rays: &[LatticePoint<Z>], a: &[usize; 3], b: &[usize; 3]) -> bool {
    let shared: Vec<usize> = a.iter().copied().filter(|i| b.contains(i)).collect();
    let all: Vec<usize> = a
        .iter()
        .chain(b.iter().filter(|i| !a.contains(i)))
        .copied()
        .collect();
    let feasible = |h: &LatticePoint<Z>| {
        a.iter().all(|&i| !rays[i].dot(h).is_negative())
            && b.iter().all(|&i| !rays[i].dot(h).is_positive())
            && shared.iter().all(|&i| rays[i].dot(h).is_zero())
    };
    let mut sum = LatticePoint::zero();
    for (k, &i) in all.iter().enumerate() {
        for &j in &all[k + 1..] {
            let h = rays[i].cross(&rays[j]);
            if h.is_zero() {
                continue;
            }
            for cand in [h.clone(), -&h] {
                if feasible(&cand) {
                    sum = &sum + &cand;
                }
            }
        }
    }
    a.iter()
        .filter(|i| !shared.contains(i))
        .all(|&i| rays[i].dot(&sum).is_positive())
        && b.iter()
            .filter(|i| !shared.contains(i))
            .all(|&i| rays[i].dot(&sum).is_negative())
        && shared.iter().all(|&i| rays[i].dot(&sum).is_zero())
}

fn rebuild<Z: LatticeInt>(
    f: &Fan<Z>,
    rays: Vec<LatticePoint<Z>>,
    names: Vec<Option<String>>,
    cones: Vec<[usize; 3]>,
) -> Result<Fan<Z>> {
    let out = build(rays, cones.into_iter().map(|c| c.to_vec()).collect(), names)?;
    if f.complete && !out.complete {
        return Err(Error::NotComplete);
    }
    Ok(out)
}

/// Bistellar exchange across wall `w` (an index into `f.walls()`).
///
/// The two cones through the wall are replaced by the two cones through the
/// complementary pair of the circuit.
pub fn flip<Z: LatticeInt>(f: &Fan<Z>, w: usize) -> Result<Fan<Z>> {
    let walls = f.walls()?;
    let wall = walls
        .get(w)
        .ok_or_else(|| Error::NoSuchWall(format!("index {w}")))?;
    let (positive, negative) = wall.sign_pattern();
    if (positive, negative) != (2, 2) {
        return Err(Error::FlipNotDefined { positive, negative });
    }
    let (a, b) = (wall.off_a, wall.off_b);
    let mut cones: Vec<[usize; 3]> = f
        .cones
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != wall.side_a && *i != wall.side_b)
        .map(|(_, c)| c.rays)
        .collect();
    cones.push([a, b, wall.rays[0]]);
    cones.push([a, b, wall.rays[1]]);
    rebuild(f, f.rays.clone(), f.names.clone(), cones)
}

/// Flip across the wall spanned by rays `a` and `b`.
pub fn flip_at<Z: LatticeInt>(f: &Fan<Z>, a: usize, b: usize) -> Result<Fan<Z>> {
    let w = f
        .find_wall(a, b)
        .ok_or_else(|| Error::NoSuchWall(format!("{},{}", f.ray_name(a), f.ray_name(b))))?;
    flip(f, w)
}

/// Stellar subdivision of `f` at the primitive point `w`.
pub fn star_subdivision<Z: LatticeInt>(f: &Fan<Z>, w: &LatticePoint<Z>) -> Result<Fan<Z>> {
    if w.is_zero() || !w.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    if f.find_ray(w).is_some() {
        return Ok(f.clone());
    }
    let containing = f.cones_containing(w);
    let (c0, lam) = containing.first().ok_or(Error::OutsideSupport)?;
    let face: Vec<usize> = (0..3)
        .filter(|&k| lam[k].is_positive())
        .map(|k| f.cones[*c0].rays[k])
        .collect();
    let new = f.rays.len();
    let mut cones = Vec::new();
    for c in &f.cones {
        if face.iter().all(|r| c.contains_ray(*r)) {
            for &r in &face {
                let mut nc = c.rays;
                let pos = nc.iter().position(|&x| x == r).expect("face ray in cone");
                nc[pos] = new;
                cones.push(nc);
            }
        } else {
            cones.push(c.rays);
        }
    }
    let mut rays = f.rays.clone();
    rays.push(w.clone());
    let mut names = f.names.clone();
    names.push(None);
    rebuild(f, rays, names, cones)
}

fn named<Z: LatticeInt>(rays: &[[i64; 3]], cones: &[[usize; 3]], names: &[&str]) -> Result<Fan<Z>> {
    make_fan(
        rays.iter().map(|&r| LatticePoint::from_i64(r)).collect(),
        cones.iter().map(|c| c.to_vec()).collect(),
        Some(names.iter().map(|s| s.to_string()).collect()),
    )
}

/// Projective space: rays `e1, e2, e3, -(e1+e2+e3)`.
pub fn projective_space<Z: LatticeInt>() -> Fan<Z> {
    named(
        &[[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]],
        &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]],
        &["H1", "H2", "H3", "H0"],
    )
    .expect("projective space fan is valid")
}

/// The splitting bundle `P(O + O(alpha) + O(beta))` over `P^1`.
///
/// Ray order: `e0, e1, e2, v0, v1`, tagged `D0, D1, D2, E0, E1`, with
/// `e0 = -e1 - e2`, `v1 = (1,0,0)` and `v0 = (-1, alpha, beta)`.
pub fn bundle_over_p1<Z: LatticeInt>(alpha: i64, beta: i64) -> Result<Fan<Z>> {
    if alpha < beta || beta < 0 {
        return Err(Error::BadParameters(format!(
            "need alpha >= beta >= 0, got ({alpha},{beta})"
        )));
    }
    let (e0, e1, e2, v0, v1) = (0, 1, 2, 3, 4);
    named(
        &[
            [0, -1, -1],
            [0, 1, 0],
            [0, 0, 1],
            [-1, alpha, beta],
            [1, 0, 0],
        ],
        &[
            [v1, e1, e2],
            [v1, e0, e2],
            [v1, e0, e1],
            [v0, e1, e2],
            [v0, e0, e2],
            [v0, e0, e1],
        ],
        &["D0", "D1", "D2", "E0", "E1"],
    )
}

/// The bundle `P(O + O(a))` over `P^2`.
///
/// Ray order: base rays `(1,0,0), (0,1,0), (-1,-1,a)` tagged `B1, B2, B0`,
/// then the fiber rays `(0,0,1), (0,0,-1)` tagged `S+, S-`.
pub fn bundle_over_p2<Z: LatticeInt>(a: i64) -> Result<Fan<Z>> {
    if a < 0 {
        return Err(Error::BadParameters(format!("need a >= 0, got {a}")));
    }
    let base = [[0, 1], [0, 2], [1, 2]];
    let cones: Vec<[usize; 3]> = base
        .iter()
        .flat_map(|&[i, j]| [[i, j, 3], [i, j, 4]])
        .collect();
    named(
        &[[1, 0, 0], [0, 1, 0], [-1, -1, a], [0, 0, 1], [0, 0, -1]],
        &cones,
        &["B1", "B2", "B0", "S+", "S-"],
    )
}

/// `P^2 x P^1`.
pub fn product_p2_p1<Z: LatticeInt>() -> Fan<Z> {
    bundle_over_p2(0).expect("a = 0 is valid")
}

/// Weighted projective space `P(w0, w1, w2, w3)`.
///
/// Rays `v_i` are the images of the standard basis of `Z^4` in
/// `Z^4 / Z(w0,..,w3)`, so that `sum w_i v_i = 0`. When some weight equals 1
/// the remaining rays are taken to be the standard basis.
pub fn weighted_projective<Z: LatticeInt>(w: [i64; 4]) -> Result<Fan<Z>> {
    if w.iter().any(|&x| x <= 0) {
        return Err(Error::BadWeights(format!(
            "weights must be positive: {w:?}"
        )));
    }
    for skip in 0..4 {
        let g = (0..4)
            .filter(|&k| k != skip)
            .fold(0i64, |g, k| num_integer::gcd(g, w[k]));
        if g != 1 {
            return Err(Error::BadWeights(format!(
                "{w:?} is not well formed (weights other than w{skip} share factor {g})"
            )));
        }
    }
    let rays: Vec<[i64; 3]> = match w.iter().position(|&x| x == 1) {
        Some(p) => {
            let mut rays = vec![[0i64; 3]; 4];
            let others: Vec<usize> = (0..4).filter(|&k| k != p).collect();
            for (axis, &k) in others.iter().enumerate() {
                rays[k][axis] = 1;
                rays[p][axis] = -w[k];
            }
            rays
        }
        None => quotient_rays(w),
    };
    let names = ["V0", "V1", "V2", "V3"];
    let fan: Fan<Z> = named(&rays, &[[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]], &names)?;
    for (i, r) in fan.rays.iter().enumerate() {
        if r != &LatticePoint::from_i64(rays[i]) {
            return Err(Error::BadWeights(format!("ray v{i} is not primitive")));
        }
    }
    Ok(fan)
}

/// Rows of a unimodular `U` with `U w = e4`: the first three rows map `Z^4`
/// onto `Z^4 / Zw`.
fn quotient_rays(w: [i64; 4]) -> Vec<[i64; 3]> {
    let mut x = w;
    let mut u = [[0i64; 4]; 4];
    for (i, row) in u.iter_mut().enumerate() {
        row[i] = 1;
    }
    // Euclid on the entries of x, mirrored as row operations on u
    loop {
        let nz: Vec<usize> = (0..4).filter(|&i| x[i] != 0).collect();
        if nz.len() == 1 {
            let i = nz[0];
            if x[i] < 0 {
                x[i] = -x[i];
                u[i] = u[i].map(|c| -c);
            }
            x.swap(i, 3);
            u.swap(i, 3);
            break;
        }
        let &m = nz
            .iter()
            .min_by_key(|&&i| x[i].abs())
            .expect("nonzero entry");
        for &i in &nz {
            if i != m {
                let q = x[i].div_euclid(x[m]);
                x[i] -= q * x[m];
                let um = u[m];
                for (c, v) in u[i].iter_mut().enumerate() {
                    *v -= q * um[c];
                }
            }
        }
    }
    debug_assert_eq!(x, [0, 0, 0, 1]);
    (0..4).map(|j| [u[0][j], u[1][j], u[2][j]]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type F = Fan<BigInt>;

    fn pts(v: &[[i64; 3]]) -> Vec<LatticePoint<BigInt>> {
        v.iter().map(|&c| LatticePoint::from_i64(c)).collect()
    }

    #[test]
    fn p3_is_complete_and_smooth() {
        let f: F = projective_space();
        assert!(f.is_complete());
        assert!(f.is_smooth());
        assert_eq!(f.walls().unwrap().len(), 6);
        for w in f.walls().unwrap() {
            assert_eq!(w.sign_pattern(), (4, 0));
        }
    }

    #[test]
    fn half_space_is_incomplete() {
        let f: F = make_fan(
            pts(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, -1]]),
            vec![vec![0, 1, 2], vec![0, 1, 3]],
            None,
        )
        .unwrap();
        assert!(!f.is_complete());
        assert_eq!(f.walls(), Err(Error::NotComplete));
        assert_eq!(f.interior_walls().len(), 1);
    }

    #[test]
    fn validation_errors() {
        let r = pts(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0]]);
        assert_eq!(
            make_fan(r.clone(), vec![vec![0, 1, 3]], None).unwrap_err(),
            Error::DegenerateCone(0)
        );
        assert_eq!(
            make_fan(r.clone(), vec![vec![0, 1]], None).unwrap_err(),
            Error::NotPure(0)
        );
        // <e1,e2,e3> and <e1+e2,e3,...> overlap
        let r2 = pts(&[[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 2, 1]]);
        assert_eq!(
            make_fan(r2, vec![vec![0, 1, 2], vec![3, 2, 4]], None).unwrap_err(),
            Error::OverlappingCones(0, 1)
        );
        let dup = pts(&[[1, 0, 0], [2, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(
            make_fan(dup, vec![vec![0, 2, 3]], None).unwrap_err(),
            Error::DuplicateRay(0, 1)
        );
        let nonprim = pts(&[[2, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let f = make_fan(nonprim, vec![vec![0, 1, 2]], None).unwrap();
        assert_eq!(f.ray(0), &LatticePoint::from_i64([1, 0, 0]));
    }

    #[test]
    fn crossing_edges_rejected() {
        // two cones over triangles whose edges cross without sharing rays
        let r = pts(&[
            [1, 0, 1],
            [-1, 0, 1],
            [0, 5, 1],
            [0, 1, 1],
            [0, -5, 1],
            [5, 5, 1],
        ]);
        assert!(make_fan(r, vec![vec![0, 1, 2], vec![3, 4, 5]], None).is_err());
    }

    #[test]
    fn bundle_over_p1_walls() {
        let f: F = bundle_over_p1(6, 5).unwrap();
        assert!(f.is_complete() && f.is_smooth());
        assert_eq!(f.cones().len(), 6);
        assert_eq!(f.walls().unwrap().len(), 9);
        let w = &f.walls().unwrap()[f.find_wall(1, 2).unwrap()];
        // v0 + v1 - 6 e1 - 5 e2 = 0
        assert_eq!(w.coefficient(3), BigInt::from(1));
        assert_eq!(w.coefficient(4), BigInt::from(1));
        assert_eq!(w.coefficient(1), BigInt::from(-6));
        assert_eq!(w.coefficient(2), BigInt::from(-5));
        assert!(bundle_over_p1::<BigInt>(3, 5).is_err());
        assert!(bundle_over_p1::<BigInt>(3, -1).is_err());
    }

    #[test]
    fn flip_replaces_cones_and_is_involution() {
        let f: F = bundle_over_p1(6, 5).unwrap();
        let g = flip_at(&f, 1, 2).unwrap();
        assert!(g.cone_index([3, 4, 1]).is_some());
        assert!(g.cone_index([3, 4, 2]).is_some());
        assert!(g.cone_index([4, 1, 2]).is_none());
        assert_eq!(
            g.cones()[g.cone_index([3, 4, 1]).unwrap()].multiplicity,
            BigInt::from(5)
        );
        assert_eq!(
            g.cones()[g.cone_index([3, 4, 2]).unwrap()].multiplicity,
            BigInt::from(6)
        );
        assert_eq!(g.walls().unwrap().len(), 9);
        let back = flip_at(&g, 3, 4).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn flip_not_defined_on_p3() {
        let f: F = projective_space();
        assert_eq!(
            flip(&f, 0),
            Err(Error::FlipNotDefined {
                positive: 4,
                negative: 0
            })
        );
    }

    #[test]
    fn star_subdivisions() {
        let f: F = projective_space();
        let g = star_subdivision(&f, &LatticePoint::from_i64([1, 1, 1])).unwrap();
        assert_eq!(g.num_rays(), 5);
        assert!(g.is_complete() && g.is_smooth());
        assert_eq!(
            star_subdivision(&f, &LatticePoint::from_i64([1, 0, 0])).unwrap(),
            f
        );
        assert_eq!(
            star_subdivision(&f, &LatticePoint::from_i64([2, 2, 2])),
            Err(Error::NotPrimitive)
        );
        // point on a 2-face
        let h = star_subdivision(&f, &LatticePoint::from_i64([1, 1, 0])).unwrap();
        assert_eq!(h.cones().len(), 6);
        assert!(h.is_complete());

        let minus = flip_at(&bundle_over_p1::<BigInt>(6, 5).unwrap(), 1, 2).unwrap();
        let w = LatticePoint::from_i64([0, 1, 1]);
        let hits = minus.cones_containing(&w);
        assert_eq!(hits.len(), 1);
        assert_eq!(minus.cones()[hits[0].0].rays, [2, 3, 4]);
        assert!(hits[0].1.iter().all(|l| l.is_positive()));
        let s = star_subdivision(&minus, &w).unwrap();
        assert_eq!(s.num_rays(), 6);
        assert!(s.is_complete());
    }

    #[test]
    fn weighted_projective_multiplicities() {
        for w in [
            [1, 1, 1, 1],
            [1, 1, 1, 3],
            [1, 1, 4, 6],
            [1, 1, 1, 2],
            [2, 3, 5, 7],
        ] {
            let f: F = weighted_projective(w).unwrap();
            assert!(f.is_complete());
            for (i, &wi) in w.iter().enumerate() {
                let c = f.cone_index(
                    [0, 1, 2, 3]
                        .map(|k| if k == i { usize::MAX } else { k })
                        .into_iter()
                        .filter(|&k| k != usize::MAX)
                        .collect::<Vec<_>>()
                        .try_into()
                        .unwrap(),
                );
                assert_eq!(f.cones()[c.unwrap()].multiplicity, BigInt::from(wi));
            }
            let sum = f
                .rays()
                .iter()
                .zip(w)
                .fold(LatticePoint::zero(), |acc, (r, wi)| {
                    &acc + &r.scale(&BigInt::from(wi))
                });
            assert!(sum.is_zero());
        }
        assert!(weighted_projective::<BigInt>([2, 2, 2, 1]).is_err());
        assert!(weighted_projective::<BigInt>([0, 1, 1, 1]).is_err());
    }

    #[test]
    fn bundle_over_p2_is_smooth() {
        for a in 0..5 {
            let f: F = bundle_over_p2(a).unwrap();
            assert!(f.is_complete() && f.is_smooth());
            assert_eq!(f.walls().unwrap().len(), 9);
        }
    }
}
