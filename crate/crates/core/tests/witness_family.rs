//! Witness construction across every `C_4(0, a, a + 1, b, c)` in a box.

use std::time::Instant;

use cyclic_lattice::lattice::contains;
use cyclic_lattice::veryample::{
    build_witness_p, revalidate_witness, verify_witness, very_ample_obstruction, witness_coefficients, LevelStatus,
};
use cyclic_lattice::{CyclicPolytope, IntegerVector, RationalVector, DEFAULT_BUDGET};
use num_rational::BigRational;
use num_traits::Zero;

const TAU_MAX: i64 = 20;

fn instances(tau_max: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for a in 1..tau_max {
        for b in a + 2..tau_max {
            for c in b + 1..=tau_max {
                out.push(vec![0, a, a + 1, b, c]);
            }
        }
    }
    out
}

fn closed_form_matches(p: &CyclicPolytope, w: &IntegerVector) -> bool {
    // The coefficients live on v_1..v_5 and must reproduce p exactly.
    let coeffs = witness_coefficients(p).unwrap();
    let mut acc = RationalVector::zeros(p.width());
    for (i, c) in coeffs.iter().enumerate() {
        acc.add_scaled(c, p.vertex(i + 1));
    }
    let sum: BigRational = coeffs.iter().sum();
    acc.to_integer().as_ref() == Some(w) && sum.is_zero()
}

#[test]
fn closed_form_is_integral_and_consistent() {
    for tau in instances(TAU_MAX) {
        let p = CyclicPolytope::from_i64s(4, &tau).unwrap();
        let w = build_witness_p(&p).unwrap();
        assert!(w.degree().is_zero(), "{tau:?}");
        assert!(closed_form_matches(&p, &w), "{tau:?}");
        // v_3 + p is always cut off by the facet {1, 2, 4, 5}.
        assert!(!contains(&p, &(p.vertex(3) + &w)).unwrap(), "{tau:?}");
    }
}

#[test]
fn witness_verified_up_to_three() {
    let start = Instant::now();
    let all = instances(TAU_MAX);
    let mut hole_levels = [0usize; 3];
    for tau in &all {
        let p = CyclicPolytope::from_i64s(4, tau).unwrap();
        let w = build_witness_p(&p).unwrap();
        let fam = verify_witness(&p, &w, 3, 3, DEFAULT_BUDGET).unwrap_or_else(|e| panic!("{tau:?}: {e}"));
        for l in &fam.levels {
            assert!(!matches!(l.status, LevelStatus::Decomposes { .. }), "{tau:?}");
            if l.status == LevelStatus::Hole {
                hole_levels[l.k as usize - 1] += 1;
            }
        }
        assert!(fam.verified_k.contains(&2), "{tau:?}: {:?}", fam.verified_k);
    }
    assert_eq!(hole_levels[0], 0);
    assert_eq!(hole_levels[1], all.len());
    assert_eq!(hole_levels[2], all.len());
    eprintln!("{} instances, holes per level {hole_levels:?}, {:?}", all.len(), start.elapsed());
}

#[test]
fn mirrored_instances_and_revalidation() {
    for tau in instances(12) {
        let mirrored: Vec<i64> = tau.iter().rev().map(|t| tau[4] - t).collect();
        let p = CyclicPolytope::from_i64s(4, &mirrored).unwrap();
        let fam = very_ample_obstruction(&p, 2, DEFAULT_BUDGET)
            .unwrap()
            .unwrap_or_else(|| panic!("{mirrored:?}"));
        revalidate_witness(&fam, DEFAULT_BUDGET).unwrap();
    }
}
