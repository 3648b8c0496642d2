//! Lattice simplices given by an explicit vertex list.
//!
//! Used for simplices that are not cyclic, where the lattice points of `P`
//! may generate a proper sublattice of `Z^{d+1}`. Decomposition can then be
//! asked over `Z^{d+1}` or over that sublattice, and the two answers differ.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{self, IntegerVector};
use crate::basis::{echelon_basis, echelon_contains, lattice_index, LatticeIndex};
use crate::error::{Error, Result};

use super::{HoleReason, HoleReport};

/// Which lattice the decomposition is asked over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    /// All of `Z^{d+1}`.
    Full,
    /// The group generated by the degree-1 lattice points of `P*`.
    Generated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SimplexVerdict {
    Normal { m_max: u32 },
    Hole { hole: HoleReport },
}

impl SimplexVerdict {
    pub fn is_normal(&self) -> bool {
        matches!(self, SimplexVerdict::Normal { .. })
    }
}

/// Index of the generated lattice and decomposition verdicts over both
/// lattices. The generated-lattice verdict is only computed when the index
/// exceeds 1, since otherwise the two coincide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplexReport {
    pub lattice_index: LatticeIndex,
    pub full: SimplexVerdict,
    pub generated: Option<SimplexVerdict>,
}

/// A full-dimensional lattice simplex in `R^d`, stored homogenized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSimplex {
    vertices: Vec<IntegerVector>,
    /// Inverse of the vertex matrix, rows indexed by coordinate.
    inverse: Vec<Vec<BigRational>>,
}

impl LatticeSimplex {
    /// `points` are the `d + 1` vertices in `R^d`, without the leading 1.
    pub fn new(points: &[Vec<i64>]) -> Result<Self> {
        let d = points.first().map(Vec::len).ok_or(Error::EmptySet)?;
        if d == 0 {
            return Err(Error::ZeroDimension);
        }
        if points.len() != d + 1 {
            return Err(Error::DimensionMismatch {
                expected: d + 1,
                found: points.len(),
            });
        }
        let mut vertices = Vec::with_capacity(d + 1);
        for p in points {
            if p.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: p.len(),
                });
            }
            let mut h = vec![1];
            h.extend_from_slice(p);
            vertices.push(IntegerVector::from_i64s(&h));
        }
        let inverse = invert(&vertices)
            .ok_or_else(|| Error::BadSubset("vertices are affinely dependent".into()))?;
        Ok(LatticeSimplex { vertices, inverse })
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[IntegerVector] {
        &self.vertices
    }

    /// `lambda` with `x = sum lambda_j v_j`.
    pub fn barycentric(&self, x: &IntegerVector) -> Result<Vec<BigRational>> {
        x.check_len(self.vertices.len())?;
        let n = self.vertices.len();
        Ok((0..n)
            .map(|j| {
                x.coords()
                    .iter()
                    .zip(&self.inverse)
                    .map(|(a, row)| arith::int_rat(a) * &row[j])
                    .sum()
            })
            .collect())
    }

    /// `x in x[0] P*`.
    pub fn contains(&self, x: &IntegerVector) -> Result<bool> {
        Ok(!x.degree().is_negative() && self.barycentric(x)?.iter().all(|l| !l.is_negative()))
    }

    /// Lattice points of `m P*` by scanning the bounding box.
    pub fn points(&self, m: u32, budget: u64) -> Result<Vec<IntegerVector>> {
        let d = self.dim();
        let mb = BigInt::from(m);
        let mut lo = Vec::with_capacity(d);
        let mut hi = Vec::with_capacity(d);
        let mut size: u128 = 1;
        for k in 1..=d {
            let col = self.vertices.iter().map(|v| &v.coords()[k]);
            let a = col.clone().min().expect("nonempty") * &mb;
            let b = col.max().expect("nonempty") * &mb;
            let a = i64::try_from(a).map_err(|_| crate::frame::overflow("box"))?;
            let b = i64::try_from(b).map_err(|_| crate::frame::overflow("box"))?;
            size = size.saturating_mul((b - a + 1) as u128);
            lo.push(a);
            hi.push(b);
        }
        if size > u128::from(budget) {
            return Err(Error::InstanceTooLarge {
                what: format!("bounding box of degree {m}"),
                predicted: size,
                budget,
            });
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let mut h = vec![i64::from(m)];
            h.extend_from_slice(&cur);
            let x = IntegerVector::from_i64s(&h);
            if self.contains(&x)? {
                out.push(x);
            }
            let mut k = 0;
            loop {
                if k == d {
                    return Ok(out);
                }
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = lo[k];
                k += 1;
            }
        }
    }

    pub fn lattice_index(&self, budget: u64) -> Result<LatticeIndex> {
        lattice_index(&self.points(1, budget)?)
    }

    /// Whether `x` is a sum of `x[0]` lattice points of `P*` lying in the
    /// chosen lattice. `x` itself must lie in that lattice.
    pub fn decomposes(&self, x: &IntegerVector, ambient: Ambient, budget: u64) -> Result<bool> {
        let gens = self.points(1, budget)?;
        let basis = self.ambient_basis(ambient, budget)?;
        if !in_lattice(&basis, x) || !self.contains(x)? {
            return Ok(false);
        }
        self.decomposes_with(x, &gens)
    }

    fn ambient_basis(&self, ambient: Ambient, budget: u64) -> Result<Option<Vec<Vec<BigInt>>>> {
        match ambient {
            Ambient::Full => Ok(None),
            Ambient::Generated => Ok(Some(echelon_basis(&self.points(1, budget)?)?)),
        }
    }

    fn decomposes_with(&self, x: &IntegerVector, gens: &[IntegerVector]) -> Result<bool> {
        if x.degree().is_zero() {
            return Ok(x.is_zero());
        }
        if x.degree().is_one() {
            return Ok(gens.contains(x));
        }
        for g in gens {
            let rest = x - g;
            if self.contains(&rest)? && self.decomposes_with(&rest, gens)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Every lattice point of `m P*` in the chosen lattice is a degree-1
    /// point plus a decomposable point of degree `m - 1`, for `m = 2..=m_max`.
    pub fn idp_check(&self, m_max: u32, ambient: Ambient, budget: u64) -> Result<SimplexVerdict> {
        let gens = self.points(1, budget)?;
        let basis = self.ambient_basis(ambient, budget)?;
        for m in 2..=m_max {
            for x in self.points(m, budget)? {
                if in_lattice(&basis, &x) && !self.decomposes_with(&x, &gens)? {
                    return Ok(SimplexVerdict::Hole {
                        hole: HoleReport {
                            m,
                            alpha: x,
                            reason: HoleReason::NotSumOfLowerDegrees,
                        },
                    });
                }
            }
        }
        Ok(SimplexVerdict::Normal { m_max })
    }

    /// Index of the generated lattice, the verdict over `Z^{d+1}`, and, if
    /// the index exceeds 1, the verdict over the generated lattice.
    pub fn report(&self, m_max: u32, budget: u64) -> Result<SimplexReport> {
        let lattice_index = self.lattice_index(budget)?;
        let full = self.idp_check(m_max, Ambient::Full, budget)?;
        let generated = match &lattice_index {
            LatticeIndex::Finite(i) if i.is_one() => None,
            _ => Some(self.idp_check(m_max, Ambient::Generated, budget)?),
        };
        Ok(SimplexReport {
            lattice_index,
            full,
            generated,
        })
    }
}

fn in_lattice(basis: &Option<Vec<Vec<BigInt>>>, x: &IntegerVector) -> bool {
    basis.as_ref().is_none_or(|b| echelon_contains(b, x))
}

/// Gauss-Jordan inverse over the rationals; `None` if singular.
fn invert(rows: &[IntegerVector]) -> Option<Vec<Vec<BigRational>>> {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r.coords().iter().map(arith::int_rat).collect();
            row.extend((0..n).map(|k| {
                if k == i {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = BigRational::one() / &a[col][col];
        a[col].iter_mut().for_each(|x| *x *= &inv);
        let prow = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x -= &f * p;
                }
            }
        }
    }
    // a = [I | V^{-1}] where rows of V are the vertices; x = lambda V gives
    // lambda = x V^{-1}.
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
