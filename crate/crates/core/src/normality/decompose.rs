//! Constructive decomposition for cyclic simplices whose consecutive gaps
//! are all at least `d^2 - 1`.
//!
//! Given `alpha = sum r_i v_i` of degree `m >= 2` in the cone, one round
//! finds `r'` with `sum r' = 1`, `0 <= r' <= r` and `sum r'_i v_i` integral,
//! splitting off one lattice point of `P*`. Repeating peels `alpha` into
//! `m` degree-1 points.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{self, IntegerVector, RationalVector};
use crate::error::{Error, Result};
use crate::lattice::{barycentric, contains, BarycentricCoords};
use crate::polytope::CyclicPolytope;

/// Prefix and suffix sums of sorted values against the even share `jm/(d+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinMaxBounds {
    #[serde(with = "arith::json_rat")]
    pub prefix_sum: BigRational,
    #[serde(with = "arith::json_rat")]
    pub suffix_sum: BigRational,
    #[serde(with = "arith::json_rat")]
    pub threshold: BigRational,
}

/// For `0 <= r_1 <= ... <= r_{d+1} <= 1` with sum `m`, the `j` smallest
/// values sum to at most `jm/(d+1)` and the `j` largest to at least that.
pub fn minmax_bounds(r: &[BigRational], j: usize) -> Result<MinMaxBounds> {
    if r.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::UnsortedInput);
    }
    if r.iter().any(|x| x.is_negative() || *x > BigRational::one()) {
        return Err(Error::OutOfRange("values must lie in [0, 1]".into()));
    }
    if j == 0 || j > r.len() {
        return Err(Error::OutOfRange(format!("j = {j} outside 1..={}", r.len())));
    }
    let m: BigRational = r.iter().sum();
    let prefix_sum: BigRational = r[..j].iter().sum();
    let suffix_sum: BigRational = r[r.len() - j..].iter().sum();
    let threshold = m * BigRational::new(BigInt::from(j), BigInt::from(r.len()));
    if prefix_sum > threshold || suffix_sum < threshold {
        return Err(Error::GuaranteeViolated(format!(
            "prefix {prefix_sum} / threshold {threshold} / suffix {suffix_sum}"
        )));
    }
    Ok(MinMaxBounds {
        prefix_sum,
        suffix_sum,
        threshold,
    })
}

/// Indices `i_1, ..., i_l` (1-based) in descending order of value, with all
/// values after the first summing to at most 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeavySubset {
    pub indices: Vec<usize>,
    #[serde(with = "arith::json_rat_vec")]
    pub values: Vec<BigRational>,
}

impl HeavySubset {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn total(&self) -> BigRational {
        self.values.iter().sum()
    }

    fn truncated(&self, l: usize) -> HeavySubset {
        HeavySubset {
            indices: self.indices[..l].to_vec(),
            values: self.values[..l].to_vec(),
        }
    }
}

fn descending(r: &[BigRational], set: &[usize]) -> HeavySubset {
    let mut idx = set.to_vec();
    idx.sort_by(|&a, &b| r[b - 1].cmp(&r[a - 1]).then(a.cmp(&b)));
    HeavySubset {
        values: idx.iter().map(|&i| r[i - 1].clone()).collect(),
        indices: idx,
    }
}

/// Exhaustive search over subsets of size `2..=d` for the largest total
/// whose values other than the largest sum to at most 1. Among equal
/// totals the lexicographically largest index set wins.
pub fn select_heavy_subset(r: &[BigRational], d: usize) -> Result<HeavySubset> {
    if r.iter().any(|x| x.is_negative() || *x > BigRational::one()) {
        return Err(Error::OutOfRange("values must lie in [0, 1]".into()));
    }
    let total: BigRational = r.iter().sum();
    if !total.is_integer() || total < BigRational::from_integer(BigInt::from(2)) {
        return Err(Error::OutOfRange(format!(
            "sum {total} must be an integer >= 2"
        )));
    }
    if r.len() > 20 {
        return Err(Error::OutOfRange("at most 20 values".into()));
    }
    let n = r.len();
    let mut best: Option<(BigRational, Vec<usize>)> = None;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size < 2 || size > d {
            continue;
        }
        let set: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
        let vals: Vec<&BigRational> = set.iter().map(|&i| &r[i - 1]).collect();
        let sum: BigRational = vals.iter().copied().sum();
        let largest = vals.iter().copied().max().expect("nonempty");
        if &sum - largest > BigRational::one() {
            continue;
        }
        let better = match &best {
            None => true,
            Some((s, idx)) => sum > *s || (sum == *s && set > *idx),
        };
        if better {
            best = Some((sum, set));
        }
    }
    let guarantee = BigRational::one() + BigRational::new(BigInt::one(), BigInt::from(d + 1));
    match best {
        Some((sum, set)) if sum >= guarantee => Ok(descending(r, &set)),
        Some((sum, _)) => Err(Error::GuaranteeViolated(format!(
            "best admissible subset sums to {sum} < {guarantee}"
        ))),
        None => Err(Error::GuaranteeViolated("no admissible subset".into())),
    }
}

/// `epsilon(l) = (l - 1) / (d^2 - 1)`.
pub fn epsilon(l: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(l as i64 - 1), BigInt::from((d * d) as i64 - 1))
}

fn check_indices(p: &CyclicPolytope, indices: &[usize], j: usize, p_len: usize) -> Result<()> {
    p.check_distinct(indices)?;
    let l = indices.len();
    if l < 2 || j < 2 || j > l {
        return Err(Error::OutOfRange(format!("need 2 <= j = {j} <= l = {l}")));
    }
    if p_len != l - 1 {
        return Err(Error::DimensionMismatch {
            expected: l - 1,
            found: p_len,
        });
    }
    Ok(())
}

/// `prod_{k<j} Delta_{i_k i_t} / prod_{k != t} |Delta_{i_k i_t}|`, positions 1-based.
fn z_coefficient(p: &CyclicPolytope, idx: &[usize], j: usize, t: usize) -> BigRational {
    let it = idx[t - 1];
    let num: BigInt = idx[..j - 1].iter().map(|&ik| p.delta(ik, it).clone()).product();
    let den: BigInt = idx
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != t - 1)
        .map(|(_, &ik)| p.delta(ik, it).abs())
        .product();
    BigRational::new(num, den)
}

/// `Z_l(j)` by its defining sum over `t = j..=l`. `ps[t - 2]` holds `p_t`.
pub fn z_value(p: &CyclicPolytope, indices: &[usize], ps: &[BigInt], j: usize) -> Result<BigRational> {
    check_indices(p, indices, j, ps.len())?;
    Ok((j..=indices.len())
        .map(|t| z_coefficient(p, indices, j, t) * arith::int_rat(&ps[t - 2]))
        .sum())
}

/// `Z_l(j)` through the recursion in `Z_l(j+1), ..., Z_l(l)`.
pub fn z_value_recursive(p: &CyclicPolytope, indices: &[usize], ps: &[BigInt], j: usize) -> Result<BigRational> {
    check_indices(p, indices, j, ps.len())?;
    let l = indices.len();
    let lead = z_coefficient(p, indices, j, j) * arith::int_rat(&ps[j - 2]);
    if j == l {
        return Ok(lead);
    }
    let ij = indices[j - 1];
    let mut acc = lead;
    let mut denom = BigInt::one();
    for s in 1..=l - j {
        denom *= p.delta(ij, indices[j + s - 1]);
        let z = z_value_recursive(p, indices, ps, j + s)?;
        let term = z / arith::int_rat(&denom);
        if s % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// The unique integer `p_j` making `Z_l(j)` integral with
/// `p_j <= r W_j < p_j + C_j`, where `W_j = prod_{k != j} |Delta_{i_k i_j}|`
/// and `C_j = prod_{k > j} |Delta_{i_j i_k}|`. `higher` holds
/// `p_{j+1}, ..., p_l`. The result may be negative.
pub fn choose_p(
    p: &CyclicPolytope,
    indices: &[usize],
    j: usize,
    higher: &[BigInt],
    r_target: &BigRational,
) -> Result<BigInt> {
    let l = indices.len();
    p.check_distinct(indices)?;
    if l < 2 || j < 2 || j > l {
        return Err(Error::OutOfRange(format!("need 2 <= j = {j} <= l = {l}")));
    }
    if higher.len() != l - j {
        return Err(Error::DimensionMismatch {
            expected: l - j,
            found: higher.len(),
        });
    }
    let ij = indices[j - 1];
    let w: BigInt = indices
        .iter()
        .filter(|&&ik| ik != ij)
        .map(|&ik| p.delta(ik, ij).abs())
        .product();
    let c: BigInt = indices[j..].iter().map(|&ik| p.delta(ij, ik).abs()).product();
    let sign: BigInt = indices[..j - 1]
        .iter()
        .map(|&ik| p.delta(ik, ij).signum())
        .product();
    let rest: BigRational = (j + 1..=l)
        .map(|t| z_coefficient(p, indices, j, t) * arith::int_rat(&higher[t - j - 1]))
        .sum();
    let scaled = rest * arith::int_rat(&c);
    if !scaled.is_integer() {
        return Err(Error::NoSolution(format!(
            "C * (higher terms) = {scaled} is not integral"
        )));
    }
    // sign * p_j / C + rest in Z  <=>  p_j = -sign * C * rest (mod C)
    let residue = (-(sign * scaled.to_integer())).mod_floor(&c);
    let f = (r_target * arith::int_rat(&w)).floor().to_integer();
    let pj = &f - (&f - &residue).mod_floor(&c);
    let check = z_coefficient(p, indices, j, j) * arith::int_rat(&pj)
        + (j + 1..=l)
            .map(|t| z_coefficient(p, indices, j, t) * arith::int_rat(&higher[t - j - 1]))
            .sum::<BigRational>();
    if !check.is_integer() {
        return Err(Error::NoSolution(format!("Z_l({j}) = {check} after choosing p_{j} = {pj}")));
    }
    Ok(pj)
}

/// One splitting round and how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionStep {
    pub r_prime: BarycentricCoords,
    pub point: IntegerVector,
    pub remainder: IntegerVector,
    /// The subset finally used; absent when some `r_i >= 1`.
    pub subset: Option<HeavySubset>,
    /// Subset sizes abandoned because some `p_j` came out negative.
    pub restarts: Vec<usize>,
}

fn gap_hypothesis(p: &CyclicPolytope) -> Result<()> {
    let d = p.d() as i64;
    let bound = BigInt::from(d * d - 1);
    if let Some((i, g)) = p.params().gaps().iter().enumerate().find(|(_, g)| **g < bound) {
        return Err(Error::HypothesisViolated(format!(
            "Delta_{},{} = {g} < d^2 - 1 = {bound}",
            i + 1,
            i + 2
        )));
    }
    Ok(())
}

fn check_simplex(p: &CyclicPolytope, force: bool) -> Result<Vec<usize>> {
    if !p.is_simplex() {
        return Err(Error::HypothesisViolated(
            "the constructive decomposition needs a simplex (n = d + 1)".into(),
        ));
    }
    if !force {
        gap_hypothesis(p)?;
    }
    Ok((1..=p.n()).collect())
}

/// Finds `r'` for one round. `force` skips the gap hypothesis; the
/// postconditions are checked either way.
pub fn decompose_step(
    p: &CyclicPolytope,
    alpha: &IntegerVector,
    r: &BarycentricCoords,
    force: bool,
) -> Result<DecompositionStep> {
    let simplex = check_simplex(p, force)?;
    alpha.check_len(p.width())?;
    if r.simplex_indices != simplex || r.lambdas.len() != p.n() {
        return Err(Error::BadSubset(
            "coordinates must be over vertices 1..=d+1 in order".into(),
        ));
    }
    let m = alpha.degree();
    if *m < BigInt::from(2) {
        return Err(Error::OutOfRange(format!("degree {m} < 2")));
    }
    if !r.is_nonnegative() || r.sum() != arith::int_rat(m) {
        return Err(Error::OutOfRange("alpha must lie in the cone with sum r = degree".into()));
    }

    let n = p.n();
    let mut r_prime = vec![BigRational::zero(); n];
    let mut restarts = Vec::new();
    let mut used = None;
    if let Some(i) = r.lambdas.iter().position(|x| *x >= BigRational::one()) {
        r_prime[i] = BigRational::one();
    } else {
        let mut subset = select_heavy_subset(&r.lambdas, p.d())?;
        'outer: loop {
            let l = subset.len();
            let idx = &subset.indices;
            // ps[t - 2] = p_t, filled from t = l downwards.
            let mut ps = vec![BigInt::zero(); l - 1];
            for j in (2..=l).rev() {
                let pj = choose_p(p, idx, j, &ps[j - 1..], &subset.values[j - 1])?;
                if pj.is_negative() {
                    if j == 2 {
                        return Err(Error::GuaranteeViolated(
                            "negative p_2 contradicts the subset bound".into(),
                        ));
                    }
                    restarts.push(l);
                    subset = subset.truncated(j - 1);
                    continue 'outer;
                }
                ps[j - 2] = pj;
            }
            let mut spent = BigRational::zero();
            for j in 2..=l {
                let ij = idx[j - 1];
                let w: BigInt = idx
                    .iter()
                    .filter(|&&ik| ik != ij)
                    .map(|&ik| p.delta(ik, ij).abs())
                    .product();
                let share = BigRational::new(ps[j - 2].clone(), w);
                spent += &share;
                r_prime[ij - 1] = share;
            }
            r_prime[idx[0] - 1] = BigRational::one() - spent;
            used = Some(subset);
            break;
        }
    }

    let mut acc = RationalVector::zeros(p.width());
    for (i, coeff) in r_prime.iter().enumerate() {
        acc.add_scaled(coeff, p.vertex(i + 1));
    }
    let point = acc.to_integer().ok_or_else(|| {
        Error::PostconditionFailed(format!("split-off point {acc} is not integral"))
    })?;
    let sum: BigRational = r_prime.iter().sum();
    if !sum.is_one() {
        return Err(Error::PostconditionFailed(format!("sum r' = {sum}")));
    }
    for (a, b) in r_prime.iter().zip(&r.lambdas) {
        if a.is_negative() || a > b {
            return Err(Error::PostconditionFailed(format!(
                "r' = {a} outside [0, {b}]"
            )));
        }
    }
    let remainder = alpha - &point;
    Ok(DecompositionStep {
        r_prime: BarycentricCoords {
            simplex_indices: simplex,
            lambdas: r_prime,
        },
        point,
        remainder,
        subset: used,
        restarts,
    })
}

/// `alpha` written as a sum of `m` lattice points of `P*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionCertificate {
    pub alpha: IntegerVector,
    pub parts: Vec<IntegerVector>,
}

/// Repeats [`decompose_step`] until one degree-1 point remains.
pub fn full_decompose(p: &CyclicPolytope, alpha: &IntegerVector, force: bool) -> Result<DecompositionCertificate> {
    let simplex = check_simplex(p, force)?;
    alpha.check_len(p.width())?;
    if alpha.degree() < &BigInt::one() {
        return Err(Error::OutOfRange("degree must be at least 1".into()));
    }
    let mut parts = Vec::new();
    let mut current = alpha.clone();
    while current.degree() > &BigInt::one() {
        let r = barycentric(p, &simplex, &current)?;
        let step = decompose_step(p, &current, &r, force)?;
        parts.push(step.point);
        current = step.remainder;
    }
    if !contains(p, &current)? {
        return Err(Error::OutOfRange(format!("{alpha} is not in the cone over P*")));
    }
    parts.push(current);
    Ok(DecompositionCertificate {
        alpha: alpha.clone(),
        parts,
    })
}

/// Checks a certificate from scratch: the parts sum to `alpha`, there are
/// exactly `alpha[0]` of them, and each is a lattice point of `P*`.
pub fn validate_certificate(p: &CyclicPolytope, cert: &DecompositionCertificate) -> Result<()> {
    let mut sum = IntegerVector::zeros(p.width());
    for part in &cert.parts {
        part.check_len(p.width())?;
        if !part.degree().is_one() {
            return Err(Error::PostconditionFailed(format!("{part} has degree != 1")));
        }
        if !contains(p, part)? {
            return Err(Error::PostconditionFailed(format!("{part} is outside P*")));
        }
        sum = &sum + part;
    }
    if sum != cert.alpha {
        return Err(Error::PostconditionFailed(format!(
            "parts sum to {sum}, not {}",
            cert.alpha
        )));
    }
    if BigInt::from(cert.parts.len()) != *cert.alpha.degree() {
        return Err(Error::PostconditionFailed("wrong number of parts".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::lattice::{sample_lattice_point, DEFAULT_SAMPLE_RETRIES};
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
    fn minmax_examples() {
        let r = vec![rat(1, 2); 4];
        let b = minmax_bounds(&r, 2).unwrap();
        assert_eq!(b.prefix_sum, b.threshold);
        assert_eq!(b.suffix_sum, b.threshold);
        // (0, 0, 1, 1, 1): m = 3, d + 1 = 5
        let r: Vec<_> = [0, 0, 1, 1, 1].iter().map(|&v| rat(v, 1)).collect();
        for j in 1..=5 {
            let b = minmax_bounds(&r, j).unwrap();
            assert_eq!(b.prefix_sum, rat((j as i64 - 2).max(0), 1));
        }
        assert_eq!(
            minmax_bounds(&[rat(1, 2), rat(1, 3)], 1).unwrap_err(),
            Error::UnsortedInput
        );
        assert!(matches!(
            minmax_bounds(&[rat(1, 2), rat(3, 2)], 1),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn heavy_subset_examples() {
        let s = select_heavy_subset(&vec![rat(2, 3); 3], 2).unwrap();
        assert_eq!(s.indices, vec![2, 3]);
        assert_eq!(s.total(), rat(4, 3));
        let s = select_heavy_subset(&vec![rat(2, 5); 5], 4).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.total(), rat(6, 5));
        let s = select_heavy_subset(&[rat(1, 1), rat(1, 2), rat(1, 2)], 2).unwrap();
        assert!(s.indices.contains(&1));
        assert!(s.total() >= rat(4, 3));
    }

    #[test]
    fn z_value_single_term() {
        let p = poly(3, &[0, 8, 16, 24]);
        let idx = [3, 1, 4];
        let ps = vec![BigInt::from(5), BigInt::from(7)];
        let z = z_value(&p, &idx, &ps, 3).unwrap();
        assert_eq!(z.abs(), rat(7, 1));
        let zero = vec![BigInt::zero(); 2];
        assert!(z_value(&p, &idx, &zero, 2).unwrap().is_zero());
        assert!(matches!(
            z_value(&p, &idx, &ps, 1),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn choose_p_two_point_case() {
        let p = poly(2, &[0, 3, 6]);
        let got = choose_p(&p, &[2, 3], 2, &[], &rat(2, 3)).unwrap();
        assert_eq!(got, BigInt::from(2));
    }

    #[test]
    fn worked_example_in_dimension_two() {
        let p = poly(2, &[0, 3, 6]);
        let alpha = iv(&[2, 6, 30]);
        let r = barycentric(&p, &[1, 2, 3], &alpha).unwrap();
        let step = decompose_step(&p, &alpha, &r, false).unwrap();
        assert_eq!(step.r_prime.lambdas, vec![rat(0, 1), rat(1, 3), rat(2, 3)]);
        assert_eq!(step.point, iv(&[1, 5, 27]));
        assert_eq!(step.remainder, iv(&[1, 1, 3]));
        let cert = full_decompose(&p, &alpha, false).unwrap();
        assert_eq!(cert.parts, vec![iv(&[1, 5, 27]), iv(&[1, 1, 3])]);
        validate_certificate(&p, &cert).unwrap();
    }

    #[test]
    fn unit_coordinate_short_circuit() {
        let p = poly(2, &[0, 3, 6]);
        let alpha = &p.vertex(1).scaled(&BigInt::from(2)) + &IntegerVector::zeros(3);
        let r = barycentric(&p, &[1, 2, 3], &alpha).unwrap();
        let step = decompose_step(&p, &alpha, &r, false).unwrap();
        assert_eq!(step.r_prime.lambdas, vec![rat(1, 1), rat(0, 1), rat(0, 1)]);
        assert!(step.subset.is_none());
        let single = full_decompose(&p, p.vertex(2), false).unwrap();
        assert_eq!(single.parts, vec![p.vertex(2).clone()]);
    }

    #[test]
    fn small_gaps_need_force() {
        let p = poly(2, &[0, 1, 2]);
        let alpha = iv(&[2, 2, 4]);
        let r = barycentric(&p, &[1, 2, 3], &alpha).unwrap();
        assert!(matches!(
            decompose_step(&p, &alpha, &r, false),
            Err(Error::HypothesisViolated(_))
        ));
        let cert = full_decompose(&p, &alpha, true).unwrap();
        validate_certificate(&p, &cert).unwrap();
    }

    #[test]
    fn sampled_points_decompose() {
        let cases: &[(usize, &[i64])] = &[
            (2, &[0, 3, 6]),
            (3, &[0, 8, 16, 24]),
            (4, &[0, 15, 30, 45, 60]),
            (5, &[0, 24, 48, 72, 96, 120]),
            (3, &[-5, 3, 20, 29]),
        ];
        for &(d, taus) in cases {
            let p = poly(d, taus);
            for m in 2..=d as u32 + 1 {
                for seed in 0..10 {
                    let alpha = sample_lattice_point(&p, m, seed, DEFAULT_SAMPLE_RETRIES).unwrap();
                    let cert = full_decompose(&p, &alpha, false).unwrap();
                    validate_certificate(&p, &cert).unwrap();
                }
            }
        }
    }

    #[test]
    fn hundred_samples_per_degree_in_dimension_four() {
        let p = poly(4, &[0, 15, 30, 45, 60]);
        for m in 2..=4 {
            for seed in 0..100 {
                let alpha = sample_lattice_point(&p, m, 1000 + seed, DEFAULT_SAMPLE_RETRIES).unwrap();
                let cert = full_decompose(&p, &alpha, false).unwrap();
                validate_certificate(&p, &cert).unwrap();
                assert_eq!(cert.parts.len(), m as usize);
            }
        }
    }

    #[test]
    fn certificate_validator_rejects_tampering() {
        let p = poly(2, &[0, 3, 6]);
        let mut cert = full_decompose(&p, &iv(&[2, 6, 30]), false).unwrap();
        cert.parts[0] = iv(&[1, 5, 28]);
        assert!(validate_certificate(&p, &cert).is_err());
    }

    #[test]
    fn epsilon_properties_hold_exactly() {
        for d in 2..=12usize {
            let big_d = BigRational::from_integer(BigInt::from(d * d - 1));
            assert_eq!(epsilon(d, d), rat(1, d as i64 + 1));
            for l in 2..=d {
                let geometric: BigRational = (2..=l)
                    .map(|a| BigRational::one() / big_d.pow(a as i32 - 1))
                    .sum();
                assert!(epsilon(l, d) >= geometric);
                if l > 2 {
                    assert!(epsilon(l, d) > epsilon(l - 1, d));
                }
                for j in 3..=l {
                    let slack = BigRational::from_integer(BigInt::from(l - j + 1))
                        / big_d.pow(j as i32 - 1);
                    assert!(epsilon(l, d) - slack > epsilon(j - 1, d));
                }
            }
        }
    }

    fn random_r(rng: &mut ChaCha8Rng, len: usize, m: i64) -> Vec<BigRational> {
        // Integer weights scaled to sum m with every value at most 1.
        loop {
            let den: i64 = rng.gen_range(2..60);
            let mut nums: Vec<i64> = vec![0; len];
            let mut left = m * den;
            let mut guard = 0;
            while left > 0 && guard < 10_000 {
                let i = rng.gen_range(0..len);
                if nums[i] < den {
                    nums[i] += 1;
                    left -= 1;
                }
                guard += 1;
            }
            if left == 0 {
                return nums.iter().map(|&x| rat(x, den)).collect();
            }
        }
    }

    #[test]
    fn heavy_subset_guarantee_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let d = rng.gen_range(2..=8usize);
            let m = rng.gen_range(2..=(d as i64 + 1));
            let r = random_r(&mut rng, d + 1, m);
            select_heavy_subset(&r, d).unwrap();
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn recursion_matches_defining_sum(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(3..=7usize);
            let mut taus = vec![rng.gen_range(-20i64..0)];
            for _ in 1..n {
                let last = *taus.last().unwrap();
                taus.push(last + rng.gen_range(1..9));
            }
            let p = poly(n - 1, &taus);
            let l = rng.gen_range(2..=n);
            let mut idx: Vec<usize> = (1..=n).collect();
            for i in 0..l {
                let k = rng.gen_range(i..n);
                idx.swap(i, k);
            }
            idx.truncate(l);
            let ps: Vec<BigInt> = (0..l - 1).map(|_| BigInt::from(rng.gen_range(-50i64..50))).collect();
            for j in 2..=l {
                prop_assert_eq!(
                    z_value(&p, &idx, &ps, j).unwrap(),
                    z_value_recursive(&p, &idx, &ps, j).unwrap()
                );
            }
        }

    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn minmax_holds_for_sorted_vectors(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let len = rng.gen_range(2..=9usize);
            let den: i64 = rng.gen_range(1..40);
            let mut r: Vec<BigRational> = (0..len).map(|_| rat(rng.gen_range(0..=den), den)).collect();
            r.sort();
            for j in 1..=len {
                minmax_bounds(&r, j).unwrap();
            }
        }
    }
}
