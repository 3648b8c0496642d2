//! The `b_S` vectors, the lattice bases built from them, and integer
//! lattice-index computation.
//!
//! `b_S = sum_{i in S} v_i / prod_{j in S \ i} Delta_ij` is integral for
//! every non-empty `S`, vanishes once `#S >= d + 2`, and for any ordering
//! `i_1, ..., i_{d+1}` the prefixes `b_{i_1}, b_{i_1 i_2}, ...` form a basis
//! of `Z^{d+1}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{self, IntegerVector, RationalVector};
use crate::error::{Error, Result};
use crate::facets::sigma_of;
use crate::polytope::CyclicPolytope;

/// An index set together with its integral vector `b_S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BVector {
    pub index_set: Vec<usize>,
    pub value: IntegerVector,
}

/// `d + 1` integer vectors with the index sequence that produced them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeBasis {
    pub vectors: Vec<IntegerVector>,
    pub provenance: Vec<usize>,
}

impl LatticeBasis {
    pub fn determinant(&self) -> BigInt {
        let rows: Vec<Vec<BigInt>> = self.vectors.iter().map(|v| v.0.clone()).collect();
        arith::determinant(&rows)
    }
}

/// Index of the subgroup generated by a point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeIndex {
    Finite(#[serde(with = "arith::json_int")] BigInt),
    Infinite,
}

fn check_set(p: &CyclicPolytope, s: &[usize]) -> Result<()> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    p.check_distinct(s)
}

/// Exact rational evaluation of the defining sum, checked for integrality.
pub fn b_vector(p: &CyclicPolytope, s: &[usize]) -> Result<BVector> {
    check_set(p, s)?;
    let mut acc = RationalVector::zeros(p.width());
    for &i in s {
        let denom: BigInt = s
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| p.delta(i, j).clone())
            .product();
        acc.add_scaled(&BigRational::new(BigInt::one(), denom), p.vertex(i));
    }
    let value = acc.to_integer().ok_or_else(|| {
        Error::IntegralityViolation(format!("b_{s:?} = {acc} is not integral"))
    })?;
    let mut index_set = s.to_vec();
    index_set.sort_unstable();
    Ok(BVector { index_set, value })
}

/// The two-term recursion
/// `b_S = b_{S \ a} / Delta_ba + b_{S \ b} / Delta_ab`, applied recursively
/// (always peeling the first two elements) down to singletons.
pub fn b_vector_recursive(p: &CyclicPolytope, s: &[usize], a: usize, b: usize) -> Result<BVector> {
    check_set(p, s)?;
    if a == b || !s.contains(&a) || !s.contains(&b) {
        return Err(Error::BadPivot(format!(
            "pivots ({a}, {b}) must be two distinct members of {s:?}"
        )));
    }
    let value = recurse(p, s, a, b)
        .to_integer()
        .ok_or_else(|| Error::IntegralityViolation(format!("recursion for b_{s:?}")))?;
    let mut index_set = s.to_vec();
    index_set.sort_unstable();
    Ok(BVector { index_set, value })
}

fn recurse(p: &CyclicPolytope, s: &[usize], a: usize, b: usize) -> RationalVector {
    if s.len() == 1 {
        return p.vertex(s[0]).to_rational();
    }
    let without = |x: usize| -> Vec<usize> { s.iter().copied().filter(|&i| i != x).collect() };
    let half = |rest: Vec<usize>| -> RationalVector {
        if rest.len() == 1 {
            p.vertex(rest[0]).to_rational()
        } else {
            recurse(p, &rest, rest[0], rest[1])
        }
    };
    let sa = half(without(a));
    let sb = half(without(b));
    let ca = BigRational::new(BigInt::one(), p.delta(b, a).clone());
    let cb = BigRational::new(BigInt::one(), p.delta(a, b).clone());
    RationalVector(
        sa.0.iter()
            .zip(&sb.0)
            .map(|(x, y)| x * &ca + y * &cb)
            .collect(),
    )
}

fn check_order(p: &CyclicPolytope, order: &[usize]) -> Result<()> {
    p.check_distinct(order)?;
    if order.len() != p.width() {
        return Err(Error::DimensionMismatch {
            expected: p.width(),
            found: order.len(),
        });
    }
    Ok(())
}

/// The prefix basis `b_{i_1}, b_{i_1 i_2}, ..., b_{i_1 ... i_{d+1}}`.
pub fn z_basis(p: &CyclicPolytope, order: &[usize]) -> Result<LatticeBasis> {
    check_order(p, order)?;
    let vectors = (1..=order.len())
        .map(|q| b_vector(p, &order[..q]).map(|b| b.value))
        .collect::<Result<_>>()?;
    Ok(LatticeBasis {
        vectors,
        provenance: order.to_vec(),
    })
}

/// Coefficients of `x` in the prefix basis for `order`.
///
/// The form with roots `tau_{i_1}, ..., tau_{i_{q-1}}` kills every shorter
/// prefix vector, kills every longer one (it has too low a degree), and
/// takes the value `(-1)^{q-1}` on `b_{i_1 ... i_q}`; so each coefficient is
/// read off directly.
pub fn z_coefficients(p: &CyclicPolytope, order: &[usize], x: &IntegerVector) -> Result<Vec<BigInt>> {
    check_order(p, order)?;
    x.check_len(p.width())?;
    Ok((1..=order.len())
        .map(|q| {
            let v = sigma_of(p, &order[..q - 1]).eval_int(x);
            if (q - 1) % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect())
}

/// Rational version of [`z_coefficients`], used by the sampler.
pub(crate) fn z_coefficients_rational(
    p: &CyclicPolytope,
    order: &[usize],
    x: &RationalVector,
) -> Vec<BigRational> {
    (1..=order.len())
        .map(|q| {
            let form = sigma_of(p, &order[..q - 1]);
            let v: BigRational = x
                .0
                .iter()
                .zip(&form.coeffs)
                .map(|(a, c)| a * arith::int_rat(c))
                .sum();
            if (q - 1) % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect()
}

/// `c_j = sum_{l >= j} b_{i_l ... i_{d+1}}`. The indices are taken in
/// ascending order: for other orders some `c_j` can leave `P*`.
pub fn c_basis(p: &CyclicPolytope, order: &[usize]) -> Result<LatticeBasis> {
    check_order(p, order)?;
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    let w = p.width();
    let mut vectors = vec![IntegerVector::zeros(p.width()); w];
    let mut acc = IntegerVector::zeros(p.width());
    for j in (0..w).rev() {
        acc = &acc + &b_vector(p, &sorted[j..])?.value;
        vectors[j] = acc.clone();
    }
    Ok(LatticeBasis {
        vectors,
        provenance: sorted,
    })
}

/// Row-style Hermite echelon basis of the group generated by `rows`.
/// Rows are nonzero, pivots positive, strictly increasing pivot columns.
pub fn echelon_basis(rows: &[IntegerVector]) -> Result<Vec<Vec<BigInt>>> {
    let Some(first) = rows.first() else {
        return Ok(Vec::new());
    };
    let width = first.len();
    for r in rows {
        r.check_len(width)?;
    }
    let mut work: Vec<Vec<BigInt>> = rows.iter().map(|r| r.0.clone()).collect();
    let mut basis = Vec::new();
    for col in 0..width {
        // Euclid on column `col` over the remaining rows.
        loop {
            let nonzero: Vec<usize> = (0..work.len()).filter(|&r| !work[r][col].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let pivot = *nonzero
                .iter()
                .min_by_key(|&&r| work[r][col].abs())
                .expect("nonempty");
            for &r in &nonzero {
                if r == pivot {
                    continue;
                }
                let q = work[r][col].div_floor(&work[pivot][col]);
                let prow = work[pivot].clone();
                for (a, b) in work[r].iter_mut().zip(&prow) {
                    *a -= &q * b;
                }
            }
        }
        if let Some(r) = (0..work.len()).find(|&r| !work[r][col].is_zero()) {
            let mut row = work.swap_remove(r);
            if row[col].is_negative() {
                row.iter_mut().for_each(|x| *x = -&*x);
            }
            basis.push(row);
        }
        work.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    // Reduce entries above each pivot.
    for i in 0..basis.len() {
        let col = basis[i].iter().position(|x| !x.is_zero()).expect("nonzero row");
        for k in 0..i {
            let q = basis[k][col].div_floor(&basis[i][col]);
            if !q.is_zero() {
                let prow = basis[i].clone();
                for (a, b) in basis[k].iter_mut().zip(&prow) {
                    *a -= &q * b;
                }
            }
        }
    }
    Ok(basis)
}

/// Index of the group generated by `points` inside `Z^{N+1}`.
pub fn lattice_index(points: &[IntegerVector]) -> Result<LatticeIndex> {
    let Some(first) = points.first() else {
        return Ok(LatticeIndex::Infinite);
    };
    let width = first.len();
    let basis = echelon_basis(points)?;
    if basis.len() < width {
        return Ok(LatticeIndex::Infinite);
    }
    let index = basis
        .iter()
        .enumerate()
        .map(|(i, row)| row[i].clone())
        .product();
    Ok(LatticeIndex::Finite(index))
}

/// Membership of `x` in the group spanned by an echelon basis.
pub fn echelon_contains(basis: &[Vec<BigInt>], x: &IntegerVector) -> bool {
    let mut rest = x.0.clone();
    for row in basis {
        let col = row.iter().position(|v| !v.is_zero()).expect("nonzero row");
        if rest[..col].iter().any(|v| !v.is_zero()) {
            return false;
        }
        let (q, r) = rest[col].div_rem(&row[col]);
        if !r.is_zero() {
            return false;
        }
        for (a, b) in rest.iter_mut().zip(row) {
            *a -= &q * b;
        }
    }
    rest.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::barycentric;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(d: usize, taus: &[i64]) -> CyclicPolytope {
        CyclicPolytope::from_i64s(d, taus).unwrap()
    }

    fn iv(v: &[i64]) -> IntegerVector {
        IntegerVector::from_i64s(v)
    }

    #[test]
    fn b_vector_examples() {
        let p = poly(2, &[0, 1, 3]);
        assert_eq!(b_vector(&p, &[1]).unwrap().value, iv(&[1, 0, 0]));
        assert_eq!(b_vector(&p, &[1, 2, 3]).unwrap().value, iv(&[0, 0, 1]));
        assert_eq!(b_vector(&p, &[]).unwrap_err(), Error::EmptySet);
        let q = poly(2, &[0, 1, 3, 4]);
        assert!(b_vector(&q, &[1, 2, 3, 4]).unwrap().value.is_zero());
    }

    #[test]
    fn recursion_examples() {
        let p = poly(2, &[0, 1, 3]);
        let r = b_vector_recursive(&p, &[1, 2, 3], 1, 3).unwrap();
        assert_eq!(r.value, iv(&[0, 0, 1]));
        let two = b_vector_recursive(&p, &[1, 3], 1, 3).unwrap();
        // (v_1 - v_3) / Delta_13
        assert_eq!(two.value, iv(&[0, -1, -3]));
        assert!(matches!(
            b_vector_recursive(&p, &[1, 2, 3], 1, 1),
            Err(Error::BadPivot(_))
        ));
        assert!(matches!(
            b_vector_recursive(&p, &[1, 2], 1, 3),
            Err(Error::BadPivot(_))
        ));
    }

    #[test]
    fn z_basis_examples() {
        let p = poly(2, &[0, 1, 3]);
        let basis = z_basis(&p, &[1, 2, 3]).unwrap();
        assert_eq!(
            basis.vectors,
            vec![iv(&[1, 0, 0]), iv(&[0, -1, -1]), iv(&[0, 0, 1])]
        );
        assert_eq!(basis.determinant().abs(), BigInt::one());
        let rev = z_basis(&p, &[3, 2, 1]).unwrap();
        assert_eq!(rev.determinant().abs(), BigInt::one());
        assert_eq!(z_basis(&p, &[1, 1, 2]).unwrap_err(), Error::DuplicateIndex(1));
    }

    #[test]
    fn z_basis_is_signed_unit_in_delta_frame() {
        let p = poly(4, &[0, 2, 3, 5, 8]);
        let form = crate::polytope::delta_matrix_form(&p);
        let basis = z_basis(&p, &[1, 2, 3, 4, 5]).unwrap();
        for (q, b) in basis.vectors.iter().enumerate() {
            let y = arith::row_times_matrix(&b.0, &form.u.matrix);
            for (c, val) in y.iter().enumerate() {
                if c == q {
                    assert_eq!(val.abs(), BigInt::one());
                } else {
                    assert!(val.is_zero());
                }
            }
        }
    }

    #[test]
    fn c_basis_examples() {
        let p = poly(2, &[0, 1, 3]);
        let c = c_basis(&p, &[1, 2, 3]).unwrap();
        assert_eq!(c.vectors[2], *p.vertex(3));
        assert_eq!(c.determinant().abs(), BigInt::one());
        for v in &c.vectors {
            let bc = barycentric(&p, &[1, 2, 3], v).unwrap();
            assert!(bc.lambdas.iter().all(|l| !l.is_negative()));
            assert_eq!(v.0[0], BigInt::one());
        }
    }

    #[test]
    fn lattice_index_examples() {
        let p = poly(3, &[0, 1, 2, 3]);
        let a_p = crate::lattice::enumerate_points(&p, 1, crate::DEFAULT_BUDGET).unwrap();
        assert_eq!(
            lattice_index(&a_p.points).unwrap(),
            LatticeIndex::Finite(BigInt::one())
        );
        // The vertices alone span a sublattice of index prod Delta_ij.
        assert_eq!(
            lattice_index(p.vertices()).unwrap(),
            LatticeIndex::Finite(BigInt::from(12))
        );
        let t3 = [
            iv(&[1, 0, 0, 0]),
            iv(&[1, 1, 1, 0]),
            iv(&[1, 1, 0, 1]),
            iv(&[1, 0, 1, 1]),
        ];
        assert_eq!(
            lattice_index(&t3).unwrap(),
            LatticeIndex::Finite(BigInt::from(2))
        );
        assert_eq!(
            lattice_index(&[iv(&[1, 2])]).unwrap(),
            LatticeIndex::Infinite
        );
        assert!(matches!(
            lattice_index(&[iv(&[1, 2]), iv(&[1])]),
            Err(Error::DimensionMismatch { .. })
        ));
        let basis = echelon_basis(&t3).unwrap();
        assert!(!echelon_contains(&basis, &iv(&[2, 1, 1, 1])));
        assert!(echelon_contains(&basis, &iv(&[2, 1, 1, 0])));
    }

    fn random_instance(rng: &mut ChaCha8Rng, max_d: usize, extra: usize) -> CyclicPolytope {
        let d = rng.gen_range(1..=max_d);
        let n = d + 1 + rng.gen_range(0..=extra);
        let mut taus = vec![rng.gen_range(-10i64..10)];
        for _ in 1..n {
            let last = *taus.last().unwrap();
            taus.push(last + rng.gen_range(1..7));
        }
        poly(d, &taus)
    }

    fn random_subset(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
        let mut all: Vec<usize> = (1..=n).collect();
        for i in 0..k {
            let j = rng.gen_range(i..n);
            all.swap(i, j);
        }
        all.truncate(k);
        all
    }

    #[test]
    fn recursion_matches_definition_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let p = random_instance(&mut rng, 6, 3);
            let k = rng.gen_range(2..=p.n());
            let s = random_subset(&mut rng, p.n(), k);
            let (a, b) = (s[0], s[k - 1]);
            assert_eq!(
                b_vector_recursive(&p, &s, a, b).unwrap(),
                b_vector(&p, &s).unwrap()
            );
        }
    }

    #[test]
    fn b_vectors_vanish_beyond_d_plus_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let mut p = random_instance(&mut rng, 5, 3);
            while p.n() < p.d() + 2 {
                p = random_instance(&mut rng, 5, 3);
            }
            let s = random_subset(&mut rng, p.n(), p.d() + 2);
            assert!(b_vector(&p, &s).unwrap().value.is_zero());
        }
    }

    proptest! {
        #[test]
        fn b_vectors_are_integral_and_symmetric(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_instance(&mut rng, 6, 3);
            let k = rng.gen_range(1..=p.n());
            let s = random_subset(&mut rng, p.n(), k);
            let b = b_vector(&p, &s).unwrap();
            let mut shuffled = s.clone();
            shuffled.reverse();
            prop_assert_eq!(&b_vector(&p, &shuffled).unwrap(), &b);
            let degree = if k == 1 { BigInt::one() } else { BigInt::zero() };
            prop_assert_eq!(b.value.degree(), &degree);
        }

        #[test]
        fn z_expansion_round_trips(seed in any::<u64>(), raw in proptest::collection::vec(-1000i64..1000, 7)) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_instance(&mut rng, 6, 2);
            let order = random_subset(&mut rng, p.n(), p.width());
            let x = iv(&raw[..p.width()]);
            let basis = z_basis(&p, &order).unwrap();
            prop_assert_eq!(basis.determinant().abs(), BigInt::one());
            let coeffs = z_coefficients(&p, &order, &x).unwrap();
            let mut sum = IntegerVector::zeros(p.width());
            for (c, b) in coeffs.iter().zip(&basis.vectors) {
                sum = &sum + &b.scaled(c);
            }
            prop_assert_eq!(sum, x);
        }

        #[test]
        fn c_basis_lies_in_polytope(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_instance(&mut rng, 6, 2);
            let order = random_subset(&mut rng, p.n(), p.width());
            let c = c_basis(&p, &order).unwrap();
            prop_assert_eq!(c.determinant().abs(), BigInt::one());
            for v in &c.vectors {
                prop_assert_eq!(v.degree(), &BigInt::one());
                let bc = barycentric(&p, &c.provenance, v).unwrap();
                prop_assert!(bc.lambdas.iter().all(|l| !l.is_negative()));
            }
        }
    }
}
