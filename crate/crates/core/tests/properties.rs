use num_traits::{Signed, Zero};
use proptest::prelude::*;

use torifan::divisor::{principal_divisor, q_cartier_data};
use torifan::fan::{
    bundle_over_p1, flip_at, projective_space, star_subdivision, weighted_projective,
};
use torifan::intersection::{all_curve_classes, dot, is_nef, nef_cone};
use torifan::lattice::{
    det3, primitive, solve_rational, sublattice_index, IntMatrix, LatticePoint, RationalVector,
};
use torifan::singularity::{discrepancy, discrepancy_via_subdivision};
use torifan::volume::{divisor_polytope, triple};
use torifan::{BigInt, Fan, Rational, TorusDivisor};

fn z(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn point() -> impl Strategy<Value = [i64; 3]> {
    prop::array::uniform3(-6i64..=6)
}

fn twist() -> impl Strategy<Value = (i64, i64)> {
    (1i64..=6).prop_flat_map(|a| (Just(a), 0i64..a))
}

fn flippable_twist() -> impl Strategy<Value = (i64, i64)> {
    (2i64..=6).prop_flat_map(|a| (Just(a), 1i64..a))
}

fn divisor(n: usize) -> impl Strategy<Value = TorusDivisor> {
    prop::collection::vec(-3i64..=3, n).prop_map(|c| TorusDivisor::from_ints(&c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solve_roundtrip(rows in prop::array::uniform3(point()), x in point(), d in 1i64..7) {
        let [a, b, c] = rows.map(LatticePoint::<BigInt>::from_i64);
        prop_assume!(!det3(&a, &b, &c).is_zero());
        let m = IntMatrix::from_rows(&[a.clone(), b.clone(), c.clone()]);
        let xq = RationalVector::<BigInt>([Rational::new(x[0].into(), d.into()), z(x[1]), z(x[2])]);
        let rhs = RationalVector([a.pair(&xq), b.pair(&xq), c.pair(&xq)]);
        prop_assert_eq!(solve_rational(&m, &rhs).unwrap(), xq);
    }

    #[test]
    fn index_ignores_order_and_signs(rows in prop::array::uniform3(point())) {
        let g: Vec<LatticePoint<BigInt>> = rows.iter().map(|r| LatticePoint::from_i64(*r)).collect();
        for d in 1..=3 {
            let Ok(i) = sublattice_index(&g[..d], d) else { continue };
            let mut h: Vec<_> = g[..d].iter().rev().cloned().collect();
            h[0] = -&h[0];
            prop_assert_eq!(sublattice_index(&h, d).unwrap(), i);
        }
    }

    #[test]
    fn primitive_scaling(v in point(), k in 1i64..20) {
        let v = LatticePoint::<BigInt>::from_i64(v);
        prop_assume!(!v.is_zero());
        let p = primitive(&v).unwrap();
        prop_assert!(p.is_primitive());
        prop_assert_eq!(primitive(&v.scale(&BigInt::from(k))).unwrap(), p);
    }

    #[test]
    fn principal_divisors_are_trivial((a, b) in twist(), m in point()) {
        let f: Fan = bundle_over_p1(a, b).unwrap();
        let d = principal_divisor(&f, &LatticePoint::from_i64(m));
        for c in all_curve_classes(&f).unwrap() {
            prop_assert!(dot(&d, &c).unwrap().is_zero());
        }
        let k = TorusDivisor::from_ints(&[1, 0, 0, 0, 0]);
        prop_assert_eq!(triple(&f, &d, &k, &k).unwrap(), z(0));
    }

    #[test]
    fn cartier_data_is_additive((a, b) in flippable_twist(), x in divisor(5), y in divisor(5)) {
        let f: Fan = flip_at(&bundle_over_p1(a, b).unwrap(), 1, 2).unwrap();
        let sum = q_cartier_data(&f, &(&x + &y)).unwrap();
        let parts = q_cartier_data(&f, &x).unwrap().add(&q_cartier_data(&f, &y).unwrap());
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn triple_is_trilinear((a, b) in twist(), x in divisor(5), y in divisor(5), w in divisor(5), m in point()) {
        let f: Fan = bundle_over_p1(a, b).unwrap();
        let t = |p: &TorusDivisor, q: &TorusDivisor, r: &TorusDivisor| triple(&f, p, q, r).unwrap();
        prop_assert_eq!(t(&(&x + &y), &w, &w), t(&x, &w, &w) + t(&y, &w, &w));
        prop_assert_eq!(t(&x, &y, &w), t(&w, &x, &y));
        let x2 = &x + &principal_divisor(&f, &LatticePoint::from_i64(m));
        prop_assert_eq!(t(&x2, &y, &w), t(&x, &y, &w));
    }

    #[test]
    fn nef_volumes_agree((a, b) in twist(), c in prop::collection::vec(0i64..4, 2)) {
        let f: Fan = bundle_over_p1(a, b).unwrap();
        let nef = nef_cone(&f).unwrap();
        let d = &nef.divisors[0].scale(&z(c[0])) + &nef.divisors[1].scale(&z(c[1]));
        prop_assert!(is_nef(&f, &d).unwrap());
        let p = divisor_polytope(&f, &d).unwrap();
        prop_assert_eq!(p.volume(), p.volume_from_vertex());
        prop_assert_eq!(triple(&f, &d, &d, &d).unwrap(), p.normalized_volume());
        // adding a nef class never lowers the volume
        let bigger = &d + &nef.divisors[0];
        prop_assert!(triple(&f, &bigger, &bigger, &bigger).unwrap() >= p.normalized_volume());
    }

    #[test]
    fn flip_is_an_involution((a, b) in flippable_twist()) {
        let f: Fan = bundle_over_p1(a, b).unwrap();
        let g = flip_at(&f, 1, 2).unwrap();
        prop_assert_eq!(flip_at(&g, 3, 4).unwrap(), f);
    }

    #[test]
    fn subdivision_adds_one_ray(v in point()) {
        let f: Fan = projective_space();
        let w = LatticePoint::<BigInt>::from_i64(v);
        prop_assume!(!w.is_zero() && w.is_primitive() && f.find_ray(&w).is_none());
        let g = star_subdivision(&f, &w).unwrap();
        prop_assert_eq!(g.num_rays(), f.num_rays() + 1);
        prop_assert!(g.is_complete());
    }

    #[test]
    fn discrepancy_routes_agree(v in point(), w in prop::sample::select(vec![[1i64, 1, 1, 2], [1, 1, 1, 3], [1, 1, 4, 6]])) {
        let f: Fan = weighted_projective(w).unwrap();
        let p = LatticePoint::<BigInt>::from_i64(v);
        prop_assume!(!p.is_zero() && p.is_primitive());
        let direct = discrepancy(&f, &p).unwrap().value;
        prop_assert_eq!(discrepancy_via_subdivision(&f, &p).unwrap(), direct.clone());
        if f.find_ray(&p).is_none() {
            prop_assert!(!direct.is_negative() || w == [1, 1, 4, 6]);
        }
    }
}
