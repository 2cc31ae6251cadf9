//! Fixed-width integer rings agree with BigInt on small inputs.

use torifan::fan::{bundle_over_p1, flip_at, weighted_projective};
use torifan::intersection::curve_class;
use torifan::lattice::LatticePoint;
use torifan::scalar::{fmt_q, LatticeInt};
use torifan::singularity::discrepancy;
use torifan::volume::anticanonical_volume;
use torifan::BigInt;

fn summary<Z: LatticeInt>() -> Vec<String> {
    let mut out = Vec::new();
    for w in [[1, 1, 1, 2], [1, 1, 4, 6]] {
        out.push(fmt_q(
            &anticanonical_volume(&weighted_projective::<Z>(w).unwrap()).unwrap(),
        ));
    }
    let f = bundle_over_p1::<Z>(6, 5).unwrap();
    out.push(fmt_q(&anticanonical_volume(&f).unwrap()));
    let g = flip_at(&f, 1, 2).unwrap();
    let c = curve_class(&g, g.find_wall(3, 4).unwrap()).unwrap();
    out.extend(c.profile.iter().map(fmt_q));
    out.push(fmt_q(
        &discrepancy(&g, &LatticePoint::from_i64([0, 1, 1]))
            .unwrap()
            .value,
    ));
    out
}

#[test]
fn rings_agree() {
    let big = summary::<BigInt>();
    assert_eq!(big[..3], ["125/2", "72", "54"]);
    assert_eq!(summary::<i64>(), big);
    assert_eq!(summary::<i128>(), big);
}
