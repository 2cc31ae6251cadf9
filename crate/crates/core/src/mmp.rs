//! Extremal ray classification and the two-ray game on Picard rank 2 fans.
//!
//! The contraction type of an extremal ray is read off the circuit relation of
//! any wall on it. With `n+` / `n-` the number of positive / negative
//! coefficients: `n- = 0` is a fibration over a base of dimension
//! `3 - (n+ - 1)`, `n- = 1` contracts the divisor of the negative ray onto a
//! locus of dimension `3 - n+`, and `n- >= 2` is small.

use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::divisor::canonical_divisor;
use crate::error::{Error, Result};
use crate::fan::{flip_at, Fan};
use crate::intersection::{dot, mori_cone, pair, MoriCone};
use crate::io::{fan_to_json, q_json};
use crate::scalar::{fmt_q, LatticeInt, Q};
use crate::singularity::is_terminal;
use crate::volume::{anticanonical_volume, TripleForm};

pub const DEFAULT_MAX_FLIPS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContractionKind {
    Fiber {
        base_dim: usize,
    },
    Divisorial {
        contracted_ray: usize,
        image_dim: usize,
    },
    Small,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KSign {
    Negative,
    Zero,
    Positive,
}

impl KSign {
    fn of<Z: LatticeInt>(q: &Q<Z>) -> Self {
        if q.is_negative() {
            KSign::Negative
        } else if q.is_zero() {
            KSign::Zero
        } else {
            KSign::Positive
        }
    }

    pub fn superscript(self) -> &'static str {
        match self {
            KSign::Negative => "-",
            KSign::Zero => "0",
            KSign::Positive => "+",
        }
    }
}

impl fmt::Display for KSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KSign::Negative => "negative",
            KSign::Zero => "zero",
            KSign::Positive => "positive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayClassification<Z: LatticeInt> {
    /// Index into `MoriCone::rays`.
    pub ray: usize,
    pub generator: Vec<Q<Z>>,
    pub walls: Vec<usize>,
    pub kind: ContractionKind,
    /// Sign of `K . R`.
    pub k_sign: KSign,
    /// `K . C` for the first wall on the ray.
    pub k_degree: Q<Z>,
    /// `(n,m)^s` with `n = dim Ex`, `m` the image dimension; `None` for small rays.
    pub type_label: Option<String>,
}

impl<Z: LatticeInt> RayClassification<Z> {
    pub fn describe(&self, f: &Fan<Z>) -> String {
        let kind = match self.kind {
            ContractionKind::Fiber { base_dim } => {
                format!("fiber type over a base of dimension {base_dim}")
            }
            ContractionKind::Divisorial {
                contracted_ray,
                image_dim,
            } => format!(
                "divisorial, contracts {} onto a locus of dimension {image_dim}",
                f.ray_name(contracted_ray)
            ),
            ContractionKind::Small => "small".to_string(),
        };
        let label = self.type_label.clone().unwrap_or_else(|| "-".into());
        format!(
            "{kind}; K-{} (K.C = {}); type {label}",
            self.k_sign,
            fmt_q(&self.k_degree)
        )
    }

    pub fn to_json(&self, f: &Fan<Z>) -> Value {
        let kind = match self.kind {
            ContractionKind::Fiber { base_dim } => json!({"kind": "fiber", "base_dim": base_dim}),
            ContractionKind::Divisorial {
                contracted_ray,
                image_dim,
            } => json!({
                "kind": "divisorial",
                "contracted_ray": f.ray_name(contracted_ray),
                "image_dim": image_dim
            }),
            ContractionKind::Small => json!({"kind": "small"}),
        };
        json!({
            "ray": self.ray,
            "generator": self.generator.iter().map(q_json).collect::<Vec<_>>(),
            "walls": self.walls.iter().map(|&w| f.wall_label(&f.interior_walls()[w])).collect::<Vec<_>>(),
            "contraction": kind,
            "k_sign": self.k_sign.to_string(),
            "k_degree": q_json(&self.k_degree),
            "type_label": self.type_label,
        })
    }
}

fn kind_of_wall<Z: LatticeInt>(f: &Fan<Z>, w: usize) -> ContractionKind {
    let wall = &f.interior_walls()[w];
    let (pos, neg) = wall.sign_pattern();
    match neg {
        0 => ContractionKind::Fiber {
            base_dim: 3 - (pos - 1),
        },
        1 => {
            let contracted_ray = wall
                .circuit_rays()
                .into_iter()
                .zip(&wall.relation)
                .find(|(_, c)| c.is_negative())
                .map(|(r, _)| r)
                .expect("one negative coefficient");
            ContractionKind::Divisorial {
                contracted_ray,
                image_dim: 3 - pos,
            }
        }
        _ => ContractionKind::Small,
    }
}

pub fn classify_ray<Z: LatticeInt>(
    f: &Fan<Z>,
    mori: &MoriCone<Z>,
    r: usize,
) -> Result<RayClassification<Z>> {
    let ray = mori.rays.get(r).ok_or(Error::NotExtremal)?;
    let first = *ray.walls.first().ok_or(Error::NotExtremal)?;
    let kind = kind_of_wall(f, first);
    if ray.walls.iter().any(|&w| kind_of_wall(f, w) != kind) {
        return Err(Error::InconsistentRay);
    }
    let k = canonical_divisor(f);
    let k_degree = dot(&k, &mori.classes[first])?;
    let k_sign = KSign::of(&k_degree);
    let type_label = match kind {
        ContractionKind::Fiber { base_dim } => {
            Some(format!("(3,{base_dim})^{}", k_sign.superscript()))
        }
        ContractionKind::Divisorial { image_dim, .. } => {
            Some(format!("(2,{image_dim})^{}", k_sign.superscript()))
        }
        ContractionKind::Small => None,
    };
    Ok(RayClassification {
        ray: r,
        generator: ray.generator.clone(),
        walls: ray.walls.clone(),
        kind,
        k_sign,
        k_degree,
        type_label,
    })
}

pub fn classify_rays<Z: LatticeInt>(f: &Fan<Z>) -> Result<Vec<RayClassification<Z>>> {
    let mori = mori_cone(f)?;
    (0..mori.rays.len())
        .map(|r| classify_ray(f, &mori, r))
        .collect()
}

/// Cube of the nef generators vanishing on extremal ray `r`. Zero exactly when
/// the supporting class is not big, i.e. the contraction is of fiber type.
pub fn supporting_class_cubes<Z: LatticeInt>(
    f: &Fan<Z>,
    mori: &MoriCone<Z>,
    r: usize,
) -> Result<Vec<Q<Z>>> {
    let ray = mori.rays.get(r).ok_or(Error::NotExtremal)?;
    let form = TripleForm::new(f)?;
    let nef = form.nef_cone();
    nef.generators
        .iter()
        .zip(&nef.divisors)
        .filter(|(g, _)| pair(g, &ray.generator).is_zero())
        .map(|(_, d)| form.triple(d, d, d))
        .collect()
}

#[derive(Clone, Debug)]
pub struct GameStep<Z: LatticeInt> {
    /// Ray pairs of the walls flipped to reach `fan`.
    pub flipped: Vec<[usize; 2]>,
    /// Sign of `K` on the flipped ray before the flip.
    pub k_sign: KSign,
    pub fan: Fan<Z>,
    pub volume: Option<Q<Z>>,
    pub terminal: bool,
}

#[derive(Clone, Debug)]
pub struct GameSide<Z: LatticeInt> {
    pub steps: Vec<GameStep<Z>>,
    /// Classification of the non-small ray the side ends on.
    pub end: RayClassification<Z>,
    /// Fan carrying `end`.
    pub end_fan: Fan<Z>,
}

#[derive(Clone, Debug)]
pub struct TwoRayGameReport<Z: LatticeInt> {
    pub start: Vec<RayClassification<Z>>,
    pub start_volume: Option<Q<Z>>,
    pub start_terminal: bool,
    pub left: GameSide<Z>,
    pub right: GameSide<Z>,
}

impl<Z: LatticeInt> TwoRayGameReport<Z> {
    pub fn left_end(&self) -> &RayClassification<Z> {
        &self.left.end
    }

    pub fn right_end(&self) -> &RayClassification<Z> {
        &self.right.end
    }

    pub fn to_json(&self, f: &Fan<Z>) -> Value {
        let side = |s: &GameSide<Z>| {
            json!({
                "steps": s.steps.iter().map(|st| json!({
                    "flipped": st.flipped.iter().map(|p| format!("tau({},{})", f.ray_name(p[0]), f.ray_name(p[1]))).collect::<Vec<_>>(),
                    "k_sign": st.k_sign.to_string(),
                    "fan": fan_to_json(&st.fan),
                    "volume": st.volume.as_ref().map(q_json),
                    "terminal": st.terminal,
                })).collect::<Vec<_>>(),
                "end": s.end.to_json(&s.end_fan),
            })
        };
        json!({
            "start": self.start.iter().map(|c| c.to_json(f)).collect::<Vec<_>>(),
            "start_volume": self.start_volume.as_ref().map(q_json),
            "start_terminal": self.start_terminal,
            "left": side(&self.left),
            "right": side(&self.right),
        })
    }
}

fn play_side<Z: LatticeInt>(f: &Fan<Z>, start_ray: usize, cap: usize) -> Result<GameSide<Z>> {
    let mut fan = f.clone();
    let mut mori = mori_cone(&fan)?;
    let mut r = start_ray;
    let mut steps = Vec::new();
    loop {
        let class = classify_ray(&fan, &mori, r)?;
        if class.kind != ContractionKind::Small {
            return Ok(GameSide {
                steps,
                end: class,
                end_fan: fan,
            });
        }
        if steps.len() >= cap {
            return Err(Error::IterationCapExceeded(cap));
        }
        let walls = fan.walls()?;
        let pairs: Vec<[usize; 2]> = class.walls.iter().map(|&w| walls[w].rays).collect();
        let mut next = fan.clone();
        for p in &pairs {
            next = flip_at(&next, p[0], p[1])?;
        }
        let next_mori = mori_cone(&next)?;
        if next_mori.rays.len() != 2 {
            return Err(Error::NotRankTwo(next_mori.space.dim()));
        }
        // the ray set is unchanged, so reduced coordinates are comparable
        let flipped_dir: Vec<Q<Z>> = class.generator.iter().map(|x| -x).collect();
        r = next_mori
            .rays
            .iter()
            .position(|ray| ray.generator != flipped_dir)
            .ok_or(Error::NotExtremal)?;
        steps.push(GameStep {
            flipped: pairs,
            k_sign: class.k_sign,
            volume: anticanonical_volume(&next).ok(),
            terminal: is_terminal(&next)?.holds,
            fan: next.clone(),
        });
        fan = next;
        mori = next_mori;
    }
}

/// Runs both sides of the two-ray game, flipping small rays regardless of
/// the sign of `K` until a fiber-type or divisorial ray is reached.
pub fn two_ray_game<Z: LatticeInt>(f: &Fan<Z>, cap: usize) -> Result<TwoRayGameReport<Z>> {
    let mori = mori_cone(f)?;
    if mori.space.dim() != 2 {
        return Err(Error::NotRankTwo(mori.space.dim()));
    }
    let start = (0..mori.rays.len())
        .map(|r| classify_ray(f, &mori, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(TwoRayGameReport {
        start,
        start_volume: anticanonical_volume(f).ok(),
        start_terminal: is_terminal(f)?.holds,
        left: play_side(f, 0, cap)?,
        right: play_side(f, 1, cap)?,
    })
}

/// Upper bound `ratio * b_max * kf2` on the anticanonical volume, from
/// `a <= ratio * b` and `-K^3 <= a * kf2`.
pub fn volume_bound_table<Z: LatticeInt>(b_max: &Q<Z>, kf2: &Q<Z>, ratio: &Q<Z>) -> Result<Q<Z>> {
    if !b_max.is_positive() || !kf2.is_positive() || !ratio.is_positive() {
        return Err(Error::BadParameters(
            "bound table inputs must be positive".into(),
        ));
    }
    Ok(ratio * b_max * kf2)
}

/// One row of the bound table, keyed by the dimensions of the base of the
/// fibration and of the image of the exceptional divisor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundCase {
    pub base_dim: usize,
    pub image_dim: usize,
    pub b_max: i64,
    pub kf2: i64,
    pub ratio: i64,
}

impl BoundCase {
    pub fn bound<Z: LatticeInt>(&self) -> Result<Q<Z>> {
        let q = |v: i64| Q::from_integer(Z::from_i64(v));
        volume_bound_table(&q(self.b_max), &q(self.kf2), &q(self.ratio))
    }
}

const fn case(base_dim: usize, image_dim: usize, b_max: i64, kf2: i64, ratio: i64) -> BoundCase {
    BoundCase {
        base_dim,
        image_dim,
        b_max,
        kf2,
        ratio,
    }
}

pub const BOUND_CASES: [BoundCase; 4] = [
    case(1, 1, 3, 9, 2),
    case(1, 0, 3, 9, 3),
    case(2, 1, 2, 12, 2),
    case(2, 0, 2, 12, 3),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{
        bundle_over_p1, bundle_over_p2, product_p2_p1, projective_space, star_subdivision,
    };
    use crate::lattice::LatticePoint;
    use num_bigint::BigInt;

    fn q(n: i64) -> Q<BigInt> {
        Q::from_integer(BigInt::from(n))
    }

    #[test]
    fn bundle_rays() {
        let f = bundle_over_p1::<BigInt>(6, 5).unwrap();
        let cls = classify_rays(&f).unwrap();
        let fiber = cls
            .iter()
            .find(|c| matches!(c.kind, ContractionKind::Fiber { .. }))
            .unwrap();
        assert_eq!(fiber.kind, ContractionKind::Fiber { base_dim: 1 });
        assert_eq!(fiber.k_sign, KSign::Negative);
        assert_eq!(fiber.walls.len(), 6);
        let small = cls
            .iter()
            .find(|c| c.kind == ContractionKind::Small)
            .unwrap();
        assert_eq!(small.k_sign, KSign::Positive);
        assert_eq!(small.type_label, None);
    }

    #[test]
    fn point_blowup_is_divisorial() {
        let f = star_subdivision(
            &projective_space::<BigInt>(),
            &LatticePoint::from_i64([1, 1, 1]),
        )
        .unwrap();
        let cls = classify_rays(&f).unwrap();
        let div = cls
            .iter()
            .find(|c| matches!(c.kind, ContractionKind::Divisorial { .. }))
            .unwrap();
        assert_eq!(
            div.kind,
            ContractionKind::Divisorial {
                contracted_ray: 4,
                image_dim: 0
            }
        );
        assert_eq!(div.type_label.as_deref(), Some("(2,0)^-"));
    }

    #[test]
    fn games() {
        let f = bundle_over_p2::<BigInt>(3).unwrap();
        let rep = two_ray_game(&f, DEFAULT_MAX_FLIPS).unwrap();
        assert!(rep.left.steps.is_empty() && rep.right.steps.is_empty());
        let kinds: Vec<_> = [rep.left_end(), rep.right_end()]
            .iter()
            .map(|c| (c.kind, c.k_sign))
            .collect();
        assert!(kinds.contains(&(ContractionKind::Fiber { base_dim: 2 }, KSign::Negative)));
        assert!(kinds
            .iter()
            .any(|(k, s)| matches!(k, ContractionKind::Divisorial { .. }) && *s == KSign::Zero));

        let g = product_p2_p1::<BigInt>();
        let rep = two_ray_game(&g, DEFAULT_MAX_FLIPS).unwrap();
        assert!(matches!(rep.left_end().kind, ContractionKind::Fiber { .. }));
        assert!(matches!(
            rep.right_end().kind,
            ContractionKind::Fiber { .. }
        ));
        assert!(matches!(
            two_ray_game(&projective_space::<BigInt>(), 4),
            Err(Error::NotRankTwo(1))
        ));
    }

    #[test]
    fn fiber_type_matches_supporting_class() {
        let fans: Vec<Fan<BigInt>> = vec![
            bundle_over_p1(6, 5).unwrap(),
            flip_at(&bundle_over_p1(6, 5).unwrap(), 1, 2).unwrap(),
            bundle_over_p1(2, 0).unwrap(),
            bundle_over_p2(3).unwrap(),
            product_p2_p1(),
            star_subdivision(&projective_space(), &LatticePoint::from_i64([1, 1, 1])).unwrap(),
        ];
        for f in &fans {
            let mori = mori_cone(f).unwrap();
            for r in 0..mori.rays.len() {
                let c = classify_ray(f, &mori, r).unwrap();
                let cubes = supporting_class_cubes(f, &mori, r).unwrap();
                assert!(!cubes.is_empty());
                let fiber = matches!(c.kind, ContractionKind::Fiber { .. });
                assert_eq!(cubes.iter().all(|v| v.is_zero()), fiber, "{c:?}");
            }
        }
    }

    #[test]
    fn games_of_flip_neighbours_share_sides() {
        let xl = bundle_over_p1::<BigInt>(6, 5).unwrap();
        let minus = flip_at(&xl, 1, 2).unwrap();
        let a = two_ray_game(&xl, DEFAULT_MAX_FLIPS).unwrap();
        let b = two_ray_game(&minus, DEFAULT_MAX_FLIPS).unwrap();
        let small = |rep: &TwoRayGameReport<BigInt>| {
            if rep.left.steps.is_empty() {
                rep.right.clone()
            } else {
                rep.left.clone()
            }
        };
        let other = |rep: &TwoRayGameReport<BigInt>| {
            if rep.left.steps.is_empty() {
                rep.left.clone()
            } else {
                rep.right.clone()
            }
        };
        // flipping from X_l lands on the flipped fan, then ends where its other side ends
        let (sa, ob) = (small(&a), other(&b));
        assert_eq!(sa.steps.len(), 1);
        assert_eq!(sa.steps[0].fan, minus);
        assert_eq!(sa.end.kind, ob.end.kind);
        let (sb, oa) = (small(&b), other(&a));
        assert_eq!(sb.steps[0].fan, xl);
        assert_eq!(sb.end.kind, oa.end.kind);
        assert_eq!(sb.steps[0].k_sign, KSign::Negative);
        assert_eq!(sa.steps[0].k_sign, KSign::Positive);
    }

    #[test]
    fn bound_table() {
        let got: Vec<Q<BigInt>> = BOUND_CASES
            .iter()
            .map(|c| c.bound::<BigInt>().unwrap())
            .collect();
        assert_eq!(got, vec![q(54), q(81), q(48), q(72)]);
        assert_eq!(volume_bound_table(&q(1), &q(1), &q(1)).unwrap(), q(1));
        assert!(volume_bound_table(&q(0), &q(1), &q(1)).is_err());
    }
}
