//! Integral cyclic polytopes on the moment curve, their difference table and
//! the triangular (Newton) coordinate frame.
//!
//! Indices in the public API are 1-based, matching the `[n]` convention used
//! in every report. Internally vertices are stored 0-based.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, IntegerVector};
use crate::error::{Error, Result};

/// Dimension `d` and strictly increasing integer parameters `tau_1 < ... < tau_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParameterList {
    d: usize,
    #[serde(with = "arith::json_int_vec")]
    taus: Vec<BigInt>,
}

impl ParameterList {
    pub fn new(d: usize, taus: Vec<BigInt>) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        if let Some(i) = taus.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::NonIncreasingParameters { index: i + 1 });
        }
        if taus.len() < d + 1 {
            return Err(Error::TooFewVertices { d, n: taus.len() });
        }
        Ok(ParameterList { d, taus })
    }

    pub fn from_i64s(d: usize, taus: &[i64]) -> Result<Self> {
        Self::new(d, taus.iter().map(|&t| BigInt::from(t)).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.taus.len()
    }

    pub fn taus(&self) -> &[BigInt] {
        &self.taus
    }

    /// `tau_i` for a 1-based index.
    pub fn tau(&self, i: usize) -> &BigInt {
        &self.taus[i - 1]
    }

    /// Consecutive gaps `(Delta_12, Delta_23, ..., Delta_{n-1,n})`.
    pub fn gaps(&self) -> Vec<BigInt> {
        self.taus.windows(2).map(|w| &w[1] - &w[0]).collect()
    }
}

/// The cyclic polytope `C_d(tau_1, ..., tau_n)` with its homogenized vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicPolytope {
    params: ParameterList,
    vertices: Vec<IntegerVector>,
    deltas: Vec<Vec<BigInt>>,
}

/// Builds the homogenized vertices `(1, tau, tau^2, ..., tau^d)` and the
/// full difference table.
pub fn build_polytope(params: ParameterList) -> CyclicPolytope {
    let d = params.d;
    let vertices = params
        .taus
        .iter()
        .map(|t| {
            let mut coords = Vec::with_capacity(d + 1);
            let mut power = BigInt::one();
            for _ in 0..=d {
                coords.push(power.clone());
                power *= t;
            }
            IntegerVector(coords)
        })
        .collect();
    let deltas = params
        .taus
        .iter()
        .map(|ti| params.taus.iter().map(|tj| tj - ti).collect())
        .collect();
    CyclicPolytope {
        params,
        vertices,
        deltas,
    }
}

impl CyclicPolytope {
    /// Convenience constructor for small machine-integer parameters.
    pub fn from_i64s(d: usize, taus: &[i64]) -> Result<Self> {
        Ok(build_polytope(ParameterList::from_i64s(d, taus)?))
    }

    pub fn params(&self) -> &ParameterList {
        &self.params
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    /// Number of homogenized coordinates, `d + 1`.
    pub fn width(&self) -> usize {
        self.params.d + 1
    }

    pub fn taus(&self) -> &[BigInt] {
        self.params.taus()
    }

    pub fn is_simplex(&self) -> bool {
        self.n() == self.d() + 1
    }

    /// Vertex `v_i` for a 1-based index.
    pub fn vertex(&self, i: usize) -> &IntegerVector {
        &self.vertices[i - 1]
    }

    pub fn vertices(&self) -> &[IntegerVector] {
        &self.vertices
    }

    /// `Delta_ij = tau_j - tau_i` for 1-based indices.
    pub fn delta(&self, i: usize, j: usize) -> &BigInt {
        &self.deltas[i - 1][j - 1]
    }

    pub fn delta_table(&self) -> &[Vec<BigInt>] {
        &self.deltas
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.n(),
            });
        }
        Ok(())
    }

    /// Validates a list of distinct 1-based indices.
    pub fn check_distinct(&self, indices: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.n() + 1];
        for &i in indices {
            self.check_index(i)?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::DuplicateIndex(i));
            }
        }
        Ok(())
    }

    /// The cyclic polytope on the parameter subsequence `tau_i, i in indices`
    /// (sorted ascending), in dimension `d`.
    pub fn sub_polytope(&self, indices: &[usize], d: usize) -> Result<CyclicPolytope> {
        self.check_distinct(indices)?;
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        let taus = sorted.iter().map(|&i| self.params.tau(i).clone()).collect();
        Ok(build_polytope(ParameterList::new(d, taus)?))
    }

    /// Normalized volume of the simplex on the given 1-based indices:
    /// the absolute Vandermonde product of their parameters.
    pub fn simplex_volume(&self, indices: &[usize]) -> BigInt {
        let mut v = BigInt::one();
        for (a, &i) in indices.iter().enumerate() {
            for &j in &indices[a + 1..] {
                v *= self.delta(i, j).abs();
            }
        }
        v
    }
}

/// `C_d(tau_1 + m, ..., tau_n + m)`.
pub fn translate_params(p: &CyclicPolytope, m: &BigInt) -> CyclicPolytope {
    let taus = p.taus().iter().map(|t| t + m).collect();
    build_polytope(ParameterList {
        d: p.d(),
        taus,
    })
}

/// `C_d(-tau_n, ..., -tau_1)`. Vertex `i` of the result corresponds to vertex
/// `n + 1 - i` of `p`, with odd coordinates negated.
pub fn negate_params(p: &CyclicPolytope) -> CyclicPolytope {
    let taus = p.taus().iter().rev().map(|t| -t).collect();
    build_polytope(ParameterList {
        d: p.d(),
        taus,
    })
}

/// Negates the odd coordinates; carries lattice points of `p` to lattice
/// points of `negate_params(p)` and back.
pub fn mirror_vector(x: &IntegerVector) -> IntegerVector {
    IntegerVector(
        x.0.iter()
            .enumerate()
            .map(|(k, v)| if k % 2 == 1 { -v } else { v.clone() })
            .collect(),
    )
}

/// An integer matrix together with its determinant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnimodularTransform {
    #[serde(serialize_with = "serialize_matrix")]
    pub matrix: Vec<Vec<BigInt>>,
    #[serde(with = "arith::json_int")]
    pub determinant: BigInt,
}

fn serialize_matrix<S: serde::Serializer>(
    m: &[Vec<BigInt>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for row in m {
        seq.serialize_element(&IntegerVector(row.clone()))?;
    }
    seq.end()
}

/// The triangular matrix `M = V U` with its change of basis `U`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaMatrixForm {
    #[serde(serialize_with = "serialize_matrix")]
    pub m: Vec<Vec<BigInt>>,
    pub u: UnimodularTransform,
}

impl DeltaMatrixForm {
    /// `U^{-1}`, integral since `U` is unit upper triangular.
    pub fn inverse(&self) -> Vec<Vec<BigInt>> {
        arith::unit_upper_inverse(&self.u.matrix)
    }
}

/// Newton basis matrix for the nodes `nodes[0..d]`: column `k` holds the
/// coefficients of `prod_{j<k} (t - nodes[j])`.
pub(crate) fn newton_matrix(nodes: &[BigInt], d: usize) -> Vec<Vec<BigInt>> {
    let mut u = vec![vec![BigInt::zero(); d + 1]; d + 1];
    for k in 0..=d {
        let coeffs = arith::poly_from_roots(nodes[..k].iter());
        for (row, c) in coeffs.into_iter().enumerate() {
            u[row][k] = c;
        }
    }
    u
}

/// Transforms the vertex matrix to lower-triangular form. Row `i` of `M` is
/// `(1, Delta_1i, Delta_1i Delta_2i, ...)`, zero after position `min(i-1, d)`.
pub fn delta_matrix_form(p: &CyclicPolytope) -> DeltaMatrixForm {
    let d = p.d();
    let u = newton_matrix(p.taus(), d);
    let m = p
        .vertices()
        .iter()
        .map(|v| arith::row_times_matrix(&v.0, &u))
        .collect();
    let determinant = arith::determinant(&u);
    DeltaMatrixForm {
        m,
        u: UnimodularTransform {
            matrix: u,
            determinant,
        },
    }
}
