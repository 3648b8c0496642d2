//! Lattice points of dilates `m P*`: barycentric solves, membership,
//! exhaustive enumeration and seeded sampling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{self, IntegerVector, RationalVector};
use crate::basis::{z_basis, z_coefficients_rational};
use crate::error::{Error, Result};
use crate::facets::{oriented_facets, sigma_of};
use crate::frame::{self, enumerate_cloud, PointCloud};
use crate::polytope::CyclicPolytope;

pub use crate::frame::DEFAULT_BUDGET;

/// Default number of attempts made by [`sample_lattice_point`].
pub const DEFAULT_SAMPLE_RETRIES: u32 = 1000;

/// Largest box accepted by [`box_scan_points`].
pub const BOX_SCAN_LIMIT: u128 = 20_000_000;

/// Unique rational coordinates of a point over `d + 1` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BarycentricCoords {
    pub simplex_indices: Vec<usize>,
    #[serde(with = "arith::json_rat_vec")]
    pub lambdas: Vec<BigRational>,
}

impl BarycentricCoords {
    pub fn sum(&self) -> BigRational {
        self.lambdas.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.lambdas.iter().all(|l| !l.is_negative())
    }
}

/// Solves `x = sum lambda_j v_{s_j}`. The form vanishing on every vertex of
/// the simplex except `v_j` isolates `lambda_j`.
pub fn barycentric(p: &CyclicPolytope, simplex: &[usize], x: &IntegerVector) -> Result<BarycentricCoords> {
    barycentric_rational(p, simplex, &x.to_rational())
}

pub fn barycentric_rational(
    p: &CyclicPolytope,
    simplex: &[usize],
    x: &RationalVector,
) -> Result<BarycentricCoords> {
    p.check_distinct(simplex)?;
    if simplex.len() != p.width() {
        return Err(Error::DimensionMismatch {
            expected: p.width(),
            found: simplex.len(),
        });
    }
    if x.len() != p.width() {
        return Err(Error::DimensionMismatch {
            expected: p.width(),
            found: x.len(),
        });
    }
    let lambdas = simplex
        .iter()
        .map(|&j| {
            let others: Vec<usize> = simplex.iter().copied().filter(|&i| i != j).collect();
            let form = sigma_of(p, &others);
            let num: BigRational = x
                .0
                .iter()
                .zip(&form.coeffs)
                .map(|(a, c)| a * arith::int_rat(c))
                .sum();
            let den: BigInt = others.iter().map(|&i| p.delta(i, j).clone()).product();
            num / arith::int_rat(&den)
        })
        .collect();
    Ok(BarycentricCoords {
        simplex_indices: simplex.to_vec(),
        lambdas,
    })
}

/// `x in x[0] P*`: every oriented facet value is nonnegative.
pub fn contains(p: &CyclicPolytope, x: &IntegerVector) -> Result<bool> {
    x.check_len(p.width())?;
    if x.degree().is_negative() {
        return Ok(false);
    }
    Ok(oriented_facets(p)
        .iter()
        .all(|f| !f.value(x).is_negative()))
}

/// Membership in the cone spanned by `v_i - v_base`: only the facets through
/// `v_base` are tested.
pub fn in_vertex_cone(p: &CyclicPolytope, base: usize, x: &IntegerVector) -> Result<bool> {
    p.check_index(base)?;
    x.check_len(p.width())?;
    Ok(oriented_facets(p)
        .iter()
        .filter(|f| f.set.contains(base))
        .all(|f| !f.value(x).is_negative()))
}

/// The lattice points of `m P*`, sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DilatePointSet {
    pub m: u32,
    pub points: Vec<IntegerVector>,
}

impl DilatePointSet {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

pub(crate) fn cloud_to_vectors(cloud: &PointCloud) -> Vec<IntegerVector> {
    cloud.iter().map(IntegerVector::from_i64s).collect()
}

/// Exact enumeration of `m P* ∩ Z^{d+1}` through a triangulation, each
/// simplex walked in its triangular frame.
pub fn enumerate_points(p: &CyclicPolytope, m: u32, budget: u64) -> Result<DilatePointSet> {
    let cloud = enumerate_cloud(p, m, budget)?;
    Ok(DilatePointSet {
        m,
        points: cloud_to_vectors(&cloud),
    })
}

/// Test oracle: scans the bounding box of `m P*` coordinate by coordinate.
pub fn box_scan_points(p: &CyclicPolytope, m: u32) -> Result<DilatePointSet> {
    let w = p.width();
    let mut lo = vec![0i64; w];
    let mut hi = vec![0i64; w];
    let mut volume: u128 = 1;
    for k in 0..w {
        let vals: Vec<i64> = p
            .vertices()
            .iter()
            .map(|v| v.0[k].to_i64().ok_or_else(|| frame::overflow("box")))
            .collect::<Result<_>>()?;
        lo[k] = vals.iter().min().expect("vertices") * i64::from(m);
        hi[k] = vals.iter().max().expect("vertices") * i64::from(m);
        volume = volume.saturating_mul((hi[k] - lo[k] + 1) as u128);
    }
    if volume > BOX_SCAN_LIMIT {
        return Err(Error::InstanceTooLarge {
            what: "bounding-box scan".into(),
            predicted: volume,
            budget: BOX_SCAN_LIMIT as u64,
        });
    }
    let facets = oriented_facets(p);
    let mut points = Vec::new();
    let mut x = lo.clone();
    loop {
        let v = IntegerVector::from_i64s(&x);
        if facets.iter().all(|f| !f.value(&v).is_negative()) {
            points.push(v);
        }
        let mut k = w;
        loop {
            if k == 0 {
                points.sort();
                return Ok(DilatePointSet { m, points });
            }
            k -= 1;
            if x[k] < hi[k] {
                x[k] += 1;
                break;
            }
            x[k] = lo[k];
        }
    }
}

/// Seeded pseudo-random lattice point of `m P*` for a simplex `P`.
///
/// Draws an interior rational point, expands it in the prefix basis
/// `b_1, b_12, ...`, rounds each coefficient with a small jitter and keeps
/// the result if it lies in `m P*`. The distribution is not uniform; it
/// favors points near the barycenter.
pub fn sample_lattice_point(p: &CyclicPolytope, m: u32, seed: u64, retries: u32) -> Result<IntegerVector> {
    if !p.is_simplex() {
        return Err(Error::HypothesisViolated(
            "the basis-driven sampler needs a simplex (n = d + 1)".into(),
        ));
    }
    if m == 0 {
        return Err(Error::OutOfRange("sampling needs m >= 1".into()));
    }
    let order: Vec<usize> = (1..=p.n()).collect();
    let basis = z_basis(p, &order)?;
    let facets = oriented_facets(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mbig = BigInt::from(m);
    for attempt in 0..retries {
        let weights: Vec<u64> = (0..p.n())
            .map(|_| {
                let u: u64 = rng.gen_range(1..=1000);
                if attempt % 2 == 1 {
                    u * u
                } else {
                    u
                }
            })
            .collect();
        let total: u64 = weights.iter().sum();
        let mut x = RationalVector::zeros(p.width());
        for (i, &w) in weights.iter().enumerate() {
            let lambda = BigRational::new(&mbig * BigInt::from(w), BigInt::from(total));
            x.add_scaled(&lambda, p.vertex(i + 1));
        }
        let coeffs = z_coefficients_rational(p, &order, &x);
        let mut point = IntegerVector::zeros(p.width());
        for (q, (c, b)) in coeffs.iter().zip(&basis.vectors).enumerate() {
            let mut k = if q == 0 {
                mbig.clone()
            } else {
                c.round().to_integer()
            };
            if q > 0 {
                k += BigInt::from(rng.gen_range(-1i64..=1));
            }
            point = &point + &b.scaled(&k);
        }
        if point.degree() == &mbig && facets.iter().all(|f| !f.value(&point).is_negative()) {
            return Ok(point);
        }
    }
    Err(Error::SamplingExhausted { attempts: retries })
}

/// Degree-`m` check used by tests: `x = sum lambda_i v_i` with `sum = m`.
pub fn degree_matches(bc: &BarycentricCoords, m: u32) -> bool {
    bc.sum() == BigRational::from_integer(BigInt::from(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use std::collections::BTreeSet;

    fn poly(d: usize, taus: &[i64]) -> CyclicPolytope {
        CyclicPolytope::from_i64s(d, taus).unwrap()
    }

    fn iv(v: &[i64]) -> IntegerVector {
        IntegerVector::from_i64s(v)
    }

    #[test]
    fn barycentric_examples() {
        let p = poly(2, &[0, 1, 2]);
        let bc = barycentric(&p, &[1, 2, 3], &iv(&[1, 1, 2])).unwrap();
        assert_eq!(bc.lambdas, vec![rat(1, 2), rat(0, 1), rat(1, 2)]);
        let v = barycentric(&p, &[1, 2, 3], p.vertex(2)).unwrap();
        assert_eq!(v.lambdas, vec![rat(0, 1), rat(1, 1), rat(0, 1)]);
        let q = poly(2, &[0, 3, 6]);
        let bc = barycentric(&q, &[1, 2, 3], &iv(&[2, 6, 30])).unwrap();
        assert_eq!(bc.lambdas, vec![rat(2, 3); 3]);
        assert!(degree_matches(&bc, 2));
    }

    #[test]
    fn containment_examples() {
        let p = poly(2, &[0, 1, 2]);
        for v in p.vertices() {
            assert!(contains(&p, v).unwrap());
        }
        assert!(contains(&p, &iv(&[1, 1, 2])).unwrap());
        assert!(!contains(&p, &iv(&[1, 1, 0])).unwrap());
        assert!(matches!(
            contains(&p, &iv(&[1, 1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn enumeration_examples() {
        let p = poly(2, &[0, 1, 2]);
        let pts = enumerate_points(&p, 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(pts.count(), 4);
        assert_eq!(pts, box_scan_points(&p, 1).unwrap());
        let zero = enumerate_points(&p, 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(zero.points, vec![iv(&[0, 0, 0])]);
        let q = poly(3, &[0, 1, 2, 3]);
        assert_eq!(
            enumerate_points(&q, 1, DEFAULT_BUDGET).unwrap(),
            box_scan_points(&q, 1).unwrap()
        );
    }

    #[test]
    fn enumeration_matches_box_scan_on_small_instances() {
        let cases: &[(usize, &[i64], u32)] = &[
            (1, &[0, 3], 2),
            (1, &[-2, 1, 4], 3),
            (2, &[0, 1, 3], 3),
            (2, &[-1, 0, 2, 3, 5], 2),
            (3, &[0, 1, 2, 3], 2),
            (3, &[0, 1, 2, 4, 5], 1),
            (3, &[-1, 0, 1, 3, 4, 5], 1),
            (3, &[0, 2, 3, 4], 2),
            (4, &[0, 1, 2, 3, 4], 1),
        ];
        for &(d, taus, m) in cases {
            let p = poly(d, taus);
            let fast = enumerate_points(&p, m, DEFAULT_BUDGET).unwrap();
            let slow = box_scan_points(&p, m).unwrap();
            assert_eq!(fast, slow, "C_{d}{taus:?} at m = {m}");
            for x in &fast.points {
                assert!(contains(&p, x).unwrap());
                let simplex: Vec<usize> = (1..=d + 1).collect();
                if p.is_simplex() {
                    let bc = barycentric(&p, &simplex, x).unwrap();
                    assert!(degree_matches(&bc, m));
                }
            }
        }
    }

    #[test]
    fn minkowski_sums_stay_in_double_dilate() {
        let p = poly(3, &[0, 1, 3, 4]);
        let one = enumerate_points(&p, 1, DEFAULT_BUDGET).unwrap();
        let two: BTreeSet<IntegerVector> = enumerate_points(&p, 2, DEFAULT_BUDGET)
            .unwrap()
            .points
            .into_iter()
            .collect();
        for a in &one.points {
            for b in &one.points {
                assert!(two.contains(&(a + b)));
            }
        }
    }

    #[test]
    fn sampler_is_deterministic_and_valid() {
        let p = poly(4, &[0, 15, 30, 45, 60]);
        for seed in 0..100 {
            let x = sample_lattice_point(&p, 2, seed, DEFAULT_SAMPLE_RETRIES).unwrap();
            assert_eq!(x.degree(), &BigInt::from(2));
            assert!(contains(&p, &x).unwrap());
            assert_eq!(
                x,
                sample_lattice_point(&p, 2, seed, DEFAULT_SAMPLE_RETRIES).unwrap()
            );
        }
        let q = poly(2, &[0, 1, 2, 3]);
        assert!(matches!(
            sample_lattice_point(&q, 2, 0, 10),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            sample_lattice_point(&poly(2, &[0, 1, 2]), 2, 0, 0),
            Err(Error::SamplingExhausted { attempts: 0 })
        ));
    }
}
