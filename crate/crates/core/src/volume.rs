//! Divisor polytopes, exact volumes and triple intersection numbers.
//!
//! For nef `N` on a complete fan, `N^3 = 6 vol(P_N)`. Arbitrary triple
//! products are obtained by writing each divisor as a difference of nef
//! classes and polarizing the cubic form.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Signed, Zero};

use crate::divisor::{anticanonical_divisor, q_cartier_data, TorusDivisor};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::intersection::{is_nef, nef_cone, NefCone};
use crate::lattice::{
    det3, det3_q, rank, solve_consistent, solve_square, LatticePoint, RationalVector,
};
use crate::scalar::{LatticeInt, Q};

/// `<m, normal> >= offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace<Z: LatticeInt> {
    pub normal: LatticePoint<Z>,
    pub offset: Q<Z>,
}

impl<Z: LatticeInt> Halfspace<Z> {
    fn slack(&self, m: &RationalVector<Z>) -> Q<Z> {
        self.normal.pair(m) - &self.offset
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope3<Z: LatticeInt> {
    pub vertices: Vec<RationalVector<Z>>,
    pub halfspaces: Vec<Halfspace<Z>>,
}

impl<Z: LatticeInt> Polytope3<Z> {
    /// Affine dimension of the vertex set.
    pub fn dimension(&self) -> usize {
        affine_dim(&self.vertices)
    }

    /// Vertices on each facet, ordered counterclockwise seen from outside.
    fn facets(&self) -> Vec<Vec<RationalVector<Z>>> {
        if self.dimension() < 3 {
            return Vec::new();
        }
        self.halfspaces
            .iter()
            .filter_map(|h| {
                let tight: Vec<RationalVector<Z>> = self
                    .vertices
                    .iter()
                    .filter(|v| h.slack(v).is_zero())
                    .cloned()
                    .collect();
                (affine_dim(&tight) == 2).then(|| {
                    let outward = (-&h.normal).to_rational();
                    ccw(tight, &outward)
                })
            })
            .collect()
    }

    /// Volume by pyramids over the facets with apex at the vertex centroid.
    pub fn volume(&self) -> Q<Z> {
        let facets = self.facets();
        if facets.is_empty() {
            return Q::zero();
        }
        let c = centroid(&self.vertices);
        let six = Q::from_integer(Z::from_i64(6));
        facets
            .iter()
            .map(|poly| {
                (1..poly.len() - 1)
                    .map(|i| det3_q(&poly[0].sub(&c), &poly[i].sub(&c), &poly[i + 1].sub(&c)).abs())
                    .sum::<Q<Z>>()
            })
            .sum::<Q<Z>>()
            / six
    }

    /// Volume by signed tetrahedra over oriented facets, apex at the first vertex.
    pub fn volume_from_vertex(&self) -> Q<Z> {
        let facets = self.facets();
        if facets.is_empty() {
            return Q::zero();
        }
        let apex = &self.vertices[0];
        let six = Q::from_integer(Z::from_i64(6));
        facets
            .iter()
            .map(|poly| {
                (1..poly.len() - 1)
                    .map(|i| {
                        det3_q(
                            &poly[0].sub(apex),
                            &poly[i].sub(apex),
                            &poly[i + 1].sub(apex),
                        )
                    })
                    .sum::<Q<Z>>()
            })
            .sum::<Q<Z>>()
            / six
    }

    /// `6 vol`, the normalized lattice volume.
    pub fn normalized_volume(&self) -> Q<Z> {
        self.volume() * Q::from_integer(Z::from_i64(6))
    }
}

fn centroid<Z: LatticeInt>(pts: &[RationalVector<Z>]) -> RationalVector<Z> {
    let n = Q::from_integer(Z::from_i64(pts.len() as i64));
    pts.iter()
        .fold(RationalVector::zero(), |acc, p| acc.add(p))
        .scale(&n.recip())
}

fn affine_dim<Z: LatticeInt>(pts: &[RationalVector<Z>]) -> usize {
    match pts.split_first() {
        None => 0,
        Some((p0, rest)) => {
            let diffs: Vec<Vec<Q<Z>>> = rest.iter().map(|p| p.sub(p0).0.to_vec()).collect();
            rank(&diffs)
        }
    }
}

fn cross_q<Z: LatticeInt>(a: &RationalVector<Z>, b: &RationalVector<Z>) -> RationalVector<Z> {
    let [a0, a1, a2] = &a.0;
    let [b0, b1, b2] = &b.0;
    RationalVector([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
}

/// Sorts coplanar points counterclockwise about `normal`.
fn ccw<Z: LatticeInt>(
    pts: Vec<RationalVector<Z>>,
    normal: &RationalVector<Z>,
) -> Vec<RationalVector<Z>> {
    let g = centroid(&pts);
    let r = pts[0].sub(&g);
    let half = |d: &RationalVector<Z>| {
        let s = normal.dot(&cross_q(&r, d));
        if s.is_positive() || (s.is_zero() && r.dot(d).is_positive()) {
            0
        } else {
            1
        }
    };
    let mut keyed: Vec<(u8, RationalVector<Z>, RationalVector<Z>)> = pts
        .into_iter()
        .map(|p| {
            let d = p.sub(&g);
            (half(&d), d, p)
        })
        .collect();
    keyed.sort_by(|(ha, da, _), (hb, db, _)| {
        ha.cmp(hb).then_with(|| {
            let s = normal.dot(&cross_q(da, db));
            if s.is_positive() {
                std::cmp::Ordering::Less
            } else if s.is_negative() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        })
    });
    keyed.into_iter().map(|(_, _, p)| p).collect()
}

/// `P_D = { m : <m, u_r> >= -a_r }` for nef `D`.
pub fn divisor_polytope<Z: LatticeInt>(f: &Fan<Z>, d: &TorusDivisor<Z>) -> Result<Polytope3<Z>> {
    if !f.is_complete() {
        return Err(Error::Unbounded);
    }
    if !is_nef(f, d)? {
        return Err(Error::NotNef);
    }
    nef_polytope(f, d)
}

/// Vertex enumeration without the nef check.
fn nef_polytope<Z: LatticeInt>(f: &Fan<Z>, d: &TorusDivisor<Z>) -> Result<Polytope3<Z>> {
    let halfspaces: Vec<Halfspace<Z>> = f
        .rays()
        .iter()
        .zip(d.coeffs())
        .map(|(u, a)| Halfspace {
            normal: u.clone(),
            offset: -a.clone(),
        })
        .collect();
    let n = f.num_rays();
    let mut verts = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (f.ray(i), f.ray(j), f.ray(k));
                if det3(a, b, c).is_zero() {
                    continue;
                }
                let rows = [a, b, c]
                    .iter()
                    .map(|u| u.0.iter().cloned().map(Q::from_integer).collect())
                    .collect();
                let rhs = [i, j, k]
                    .iter()
                    .map(|&r| halfspaces[r].offset.clone())
                    .collect();
                let x = solve_square(rows, rhs).expect("independent rays");
                let m = RationalVector([x[0].clone(), x[1].clone(), x[2].clone()]);
                if halfspaces.iter().all(|h| !h.slack(&m).is_negative()) {
                    verts.insert(m);
                }
            }
        }
    }
    if verts.is_empty() {
        return Err(Error::Unbounded);
    }
    // for nef D the vertices are exactly the local Cartier data
    let data: BTreeSet<RationalVector<Z>> = q_cartier_data(f, d)?.local.into_iter().collect();
    if data != verts {
        return Err(Error::CrossCheckFailed(
            "polytope vertices differ from Cartier data".into(),
        ));
    }
    Ok(Polytope3 {
        vertices: verts.into_iter().collect(),
        halfspaces,
    })
}

/// Trilinear intersection form on a projective fan.
pub struct TripleForm<'a, Z: LatticeInt> {
    fan: &'a Fan<Z>,
    nef: NefCone<Z>,
    cubes: RefCell<HashMap<TorusDivisor<Z>, Q<Z>>>,
}

impl<'a, Z: LatticeInt> TripleForm<'a, Z> {
    pub fn new(fan: &'a Fan<Z>) -> Result<Self> {
        let nef = nef_cone(fan)?;
        if !nef.is_full_dimensional() {
            return Err(Error::NotProjective);
        }
        Ok(Self {
            fan,
            nef,
            cubes: RefCell::new(HashMap::new()),
        })
    }

    pub fn nef_cone(&self) -> &NefCone<Z> {
        &self.nef
    }

    /// `N^3 = 6 vol(P_N)` for nef `N`.
    fn cube(&self, n: &TorusDivisor<Z>) -> Result<Q<Z>> {
        if let Some(v) = self.cubes.borrow().get(n) {
            return Ok(v.clone());
        }
        let v = if n.is_zero() {
            Q::zero()
        } else {
            nef_polytope(self.fan, n)?.normalized_volume()
        };
        self.cubes.borrow_mut().insert(n.clone(), v.clone());
        Ok(v)
    }

    fn nef_triple(
        &self,
        a: &TorusDivisor<Z>,
        b: &TorusDivisor<Z>,
        c: &TorusDivisor<Z>,
    ) -> Result<Q<Z>> {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Ok(Q::zero());
        }
        let ab = a + b;
        let ac = a + c;
        let bc = b + c;
        let abc = &ab + c;
        let total = self.cube(&abc)? - self.cube(&ab)? - self.cube(&ac)? - self.cube(&bc)?
            + self.cube(a)?
            + self.cube(b)?
            + self.cube(c)?;
        Ok(total / Q::from_integer(Z::from_i64(6)))
    }

    /// `D = P - N` with `P`, `N` nef, numerically.
    pub fn nef_split(&self, d: &TorusDivisor<Z>) -> Result<(TorusDivisor<Z>, TorusDivisor<Z>)> {
        d.check_len(self.fan.num_rays())?;
        let n = self.fan.num_rays();
        let gens = &self.nef.generators;
        let coords = self.nef.space.divisor_coords(d);
        if gens.len() == self.nef.space.dim() {
            // columns are the generators
            let cols: Vec<Vec<Q<Z>>> = (0..coords.len())
                .map(|i| gens.iter().map(|g| g[i].clone()).collect())
                .collect();
            let x = solve_consistent(&cols, &coords).ok_or(Error::NotProjective)?;
            let mut pos = TorusDivisor::zero(n);
            let mut neg = TorusDivisor::zero(n);
            for (xi, div) in x.iter().zip(&self.nef.divisors) {
                if xi.is_positive() {
                    pos = &pos + &div.scale(xi);
                } else if xi.is_negative() {
                    neg = &neg + &div.scale(&-xi);
                }
            }
            return Ok((pos, neg));
        }
        let ample = self
            .nef
            .divisors
            .iter()
            .fold(TorusDivisor::zero(n), |acc, g| &acc + g);
        let mut k = Q::zero();
        loop {
            let shifted = d + &ample.scale(&k);
            if is_nef(self.fan, &shifted)? {
                return Ok((shifted, ample.scale(&k)));
            }
            k = if k.is_zero() {
                Q::one()
            } else {
                k * Q::from_integer(Z::from_i64(2))
            };
        }
    }

    pub fn triple(
        &self,
        d1: &TorusDivisor<Z>,
        d2: &TorusDivisor<Z>,
        d3: &TorusDivisor<Z>,
    ) -> Result<Q<Z>> {
        let s1 = self.nef_split(d1)?;
        let s2 = self.nef_split(d2)?;
        let s3 = self.nef_split(d3)?;
        let mut total: Q<Z> = Q::zero();
        for (x, sx) in [(&s1.0, 1i64), (&s1.1, -1)] {
            for (y, sy) in [(&s2.0, 1i64), (&s2.1, -1)] {
                for (z, sz) in [(&s3.0, 1i64), (&s3.1, -1)] {
                    let t = self.nef_triple(x, y, z)?;
                    total = total + t * Q::from_integer(Z::from_i64(sx * sy * sz));
                }
            }
        }
        Ok(total)
    }
}

pub fn triple<Z: LatticeInt>(
    f: &Fan<Z>,
    d1: &TorusDivisor<Z>,
    d2: &TorusDivisor<Z>,
    d3: &TorusDivisor<Z>,
) -> Result<Q<Z>> {
    TripleForm::new(f)?.triple(d1, d2, d3)
}

/// `(-K)^3`, cross-checked against `6 vol(P_{-K})` when `-K` is nef.
pub fn anticanonical_volume<Z: LatticeInt>(f: &Fan<Z>) -> Result<Q<Z>> {
    let form = TripleForm::new(f)?;
    let mk = anticanonical_divisor(f);
    let v = form.triple(&mk, &mk, &mk)?;
    if is_nef(f, &mk)? {
        let direct = nef_polytope(f, &mk)?.normalized_volume();
        if direct != v {
            return Err(Error::CrossCheckFailed(format!(
                "polarization gives {v}, polytope gives {direct}"
            )));
        }
    }
    Ok(v)
}

/// `(-K)^3 = d (sum w - d)^3 / prod w` for a quasi-smooth hypersurface of
/// degree `d` in a well-formed weighted projective 4-space.
pub fn wps_hypersurface_volume<Z: LatticeInt>(d: i64, weights: [i64; 5]) -> Result<Q<Z>> {
    let sum: i64 = weights.iter().sum();
    if d <= 0 || weights.iter().any(|&w| w <= 0) || sum <= d {
        return Err(Error::BadParameters(format!(
            "need positive weights with sum > degree, got d={d}, w={weights:?}"
        )));
    }
    let idx = Z::from_i64(sum - d);
    let num = Z::from_i64(d) * idx.clone() * idx.clone() * idx;
    let den = weights
        .iter()
        .fold(Z::one(), |acc, &w| acc * Z::from_i64(w));
    Ok(Q::new(num, den))
}
