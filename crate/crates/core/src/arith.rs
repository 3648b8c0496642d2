//! Exact coordinate vectors and the small amount of integer linear algebra
//! shared by the other modules.
//!
//! Coordinate 0 of every vector is the degree (homogenizing) coordinate.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exact integer vector in `Z^{N+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerVector(pub Vec<BigInt>);

/// An exact rational vector in `Q^{N+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVector(pub Vec<BigRational>);

impl IntegerVector {
    pub fn zeros(len: usize) -> Self {
        IntegerVector(vec![BigInt::zero(); len])
    }

    pub fn from_i64s(values: &[i64]) -> Self {
        IntegerVector(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The degree coordinate `x[0]`.
    pub fn degree(&self) -> &BigInt {
        &self.0[0]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        IntegerVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn dot(&self, other: &[BigInt]) -> BigInt {
        self.0.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector(
            self.0
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        )
    }

    /// Converts to machine integers, `None` on overflow.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.len(),
            });
        }
        Ok(())
    }
}

impl<'a> Add<&'a IntegerVector> for &'a IntegerVector {
    type Output = IntegerVector;

    fn add(self, rhs: &'a IntegerVector) -> IntegerVector {
        IntegerVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a IntegerVector> for &'a IntegerVector {
    type Output = IntegerVector;

    fn sub(self, rhs: &'a IntegerVector) -> IntegerVector {
        IntegerVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &IntegerVector {
    type Output = IntegerVector;

    fn neg(self) -> IntegerVector {
        IntegerVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for IntegerVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, self.0.iter())
    }
}

impl RationalVector {
    pub fn zeros(len: usize) -> Self {
        RationalVector(vec![BigRational::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds `coeff * v` in place.
    pub fn add_scaled(&mut self, coeff: &BigRational, v: &IntegerVector) {
        for (acc, x) in self.0.iter_mut().zip(&v.0) {
            *acc += coeff * BigRational::from_integer(x.clone());
        }
    }

    /// Returns the integer vector if every denominator is 1.
    pub fn to_integer(&self) -> Option<IntegerVector> {
        self.0
            .iter()
            .map(|q| q.is_integer().then(|| q.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntegerVector)
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, self.0.iter())
    }
}

fn write_tuple<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: impl Iterator<Item = T>,
) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in items.enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

/// Coefficients (ascending powers) of the monic polynomial `prod (t - r)`.
pub fn poly_from_roots<'a>(roots: impl IntoIterator<Item = &'a BigInt>) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::one()];
    for r in roots {
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * r;
        }
        coeffs = next;
    }
    coeffs
}

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination.
pub fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Product of a row vector with a matrix given as rows.
pub(crate) fn row_times_matrix(row: &[BigInt], matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let cols = matrix.first().map_or(0, Vec::len);
    (0..cols)
        .map(|c| row.iter().zip(matrix).map(|(x, m)| x * &m[c]).sum())
        .collect()
}

/// Inverse of a unit upper-triangular integer matrix (again integral).
pub(crate) fn unit_upper_inverse(u: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = u.len();
    let mut inv = vec![vec![BigInt::zero(); n]; n];
    for col in 0..n {
        inv[col][col] = BigInt::one();
        for row in (0..col).rev() {
            let s: BigInt = (row + 1..=col).map(|k| &u[row][k] * &inv[k][col]).sum();
            inv[row][col] = -s;
        }
    }
    inv
}

#[cfg(test)]
pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn int_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

// ---------------------------------------------------------------------------
// JSON encoding: integers that fit in 64 bits are plain numbers, larger ones
// are decimal strings; rationals are "p/q" strings.

pub fn bigint_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(x.to_string()),
    }
}

pub fn bigint_from_json(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| Error::Parse(format!("{n} is not an integer"))),
        serde_json::Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("bad integer string {s:?}: {e}"))),
        other => Err(Error::Parse(format!("expected integer, found {other}"))),
    }
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_from_str(s: &str) -> Result<BigRational> {
    let bad = |e: String| Error::Parse(format!("bad rational {s:?}: {e}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|e| bad(format!("{e}")))?;
            let d: BigInt = d.trim().parse().map_err(|e| bad(format!("{e}")))?;
            if d.is_zero() {
                return Err(bad("zero denominator".into()));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            s.trim().parse().map_err(|e| bad(format!("{e}")))?,
        )),
    }
}

/// serde adapter for a single `BigInt` field.
pub mod json_int {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&x.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        bigint_from_json(&v).map_err(de::Error::custom)
    }
}

/// serde adapter for a single `BigRational` field.
pub mod json_rat {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        rational_from_str(&s).map_err(de::Error::custom)
    }
}

/// serde adapter for `Vec<BigRational>`.
pub mod json_rat_vec {
    use super::*;

    pub fn serialize<S: Serializer>(
        qs: &[BigRational],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(qs.len()))?;
        for q in qs {
            seq.serialize_element(&rational_to_string(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigRational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| rational_from_str(s).map_err(de::Error::custom))
            .collect()
    }
}

/// serde adapter for `Vec<BigInt>`.
pub mod json_int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&bigint_to_json(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<serde_json::Value>::deserialize(d)?;
        raw.iter()
            .map(|v| bigint_from_json(v).map_err(de::Error::custom))
            .collect()
    }
}

impl Serialize for IntegerVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        json_int_vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for IntegerVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = IntegerVector;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of integers or decimal strings")
            }

            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<IntegerVector, A::Error> {
                let mut out = Vec::new();
                while let Some(v) = seq.next_element::<serde_json::Value>()? {
                    out.push(bigint_from_json(&v).map_err(de::Error::custom)?);
                }
                Ok(IntegerVector(out))
            }
        }
        d.deserialize_seq(V)
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        json_rat_vec::serialize(&self.0, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let a = m(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) + 0 = -52 - 2
        assert_eq!(determinant(&a), BigInt::from(-54));
        let singular = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(determinant(&singular), BigInt::zero());
        let needs_pivot = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&needs_pivot), BigInt::from(-1));
    }

    #[test]
    fn roots_expand_to_monic_polynomial() {
        let roots = [BigInt::from(0), BigInt::from(1)];
        let c = poly_from_roots(roots.iter());
        assert_eq!(c, vec![BigInt::from(0), BigInt::from(-1), BigInt::from(1)]);
    }

    #[test]
    fn unit_upper_inverse_is_inverse() {
        let u = m(&[&[1, 3, -2], &[0, 1, 5], &[0, 0, 1]]);
        let inv = unit_upper_inverse(&u);
        for i in 0..3 {
            let row = row_times_matrix(&u[i], &inv);
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v, BigInt::from((i == j) as i64));
            }
        }
    }

    #[test]
    fn large_integers_serialize_as_strings() {
        let big = BigInt::from(1u128 << 70);
        let v = IntegerVector(vec![BigInt::from(3), big.clone()]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, format!("[3,\"{big}\"]"));
        let back: IntegerVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn rationals_round_trip_through_strings() {
        let q = rat(-17, 15);
        assert_eq!(rational_to_string(&q), "-17/15");
        assert_eq!(rational_from_str("-17/15").unwrap(), q);
        assert_eq!(rational_from_str("4").unwrap(), rat(4, 1));
        assert!(rational_from_str("1/0").is_err());
    }
}
