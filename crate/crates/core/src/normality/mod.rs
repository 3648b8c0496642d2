//! Normality of cyclic polytopes.
//!
//! Since the lattice points of `P*` span `Z^{d+1}`, normality is the same
//! as the integer decomposition property: every lattice point of `m P*`
//! is a sum of `m` lattice points of `P*`. [`idp_check`] decides this degree
//! by degree; [`decompose`] implements the constructive splitting for
//! widely spaced simplices; [`general`] handles arbitrary lattice simplices
//! given by vertex lists.

pub mod decompose;
pub mod general;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::IntegerVector;
use crate::error::{Error, Result};
use crate::facets::subsets;
use crate::frame::{enumerate_cloud, FacetTable, PointCloud};
use crate::lattice::{contains, enumerate_points};
use crate::polytope::CyclicPolytope;

pub use decompose::{
    choose_p, decompose_step, epsilon, full_decompose, minmax_bounds, select_heavy_subset,
    validate_certificate, z_value, z_value_recursive, DecompositionCertificate, DecompositionStep,
    HeavySubset, MinMaxBounds,
};

/// Why a hole fails to decompose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HoleReason {
    NotSumOfLowerDegrees,
}

/// A lattice point of `m P*` that is not a degree-1 point plus a lattice
/// point of `(m - 1) P*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HoleReport {
    pub m: u32,
    pub alpha: IntegerVector,
    pub reason: HoleReason,
}

/// Number of lattice points examined at one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCount {
    pub m: u32,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IdpVerdict {
    Normal {
        m_max: u32,
        generators: usize,
        degrees: Vec<DegreeCount>,
    },
    Hole {
        hole: HoleReport,
        generators: usize,
        degrees: Vec<DegreeCount>,
    },
}

impl IdpVerdict {
    pub fn is_normal(&self) -> bool {
        matches!(self, IdpVerdict::Normal { .. })
    }

    pub fn hole(&self) -> Option<&HoleReport> {
        match self {
            IdpVerdict::Hole { hole, .. } => Some(hole),
            IdpVerdict::Normal { .. } => None,
        }
    }
}

/// Degrees `2..=max(2, d - 1)` suffice: in a lattice `d`-polytope every
/// point of degree at least `d` splits off a degree-1 point.
pub fn default_m_max(d: usize) -> u32 {
    (d.saturating_sub(1)).max(2) as u32
}

/// Degree-1 lattice points indexed for the dominance query
/// "is there a generator `g` with `f(g) <= f(x)` on every facet?".
pub(crate) struct GeneratorIndex {
    facets: usize,
    values: Vec<i64>,
    by_facet: Vec<Vec<u32>>,
    keys: Vec<Vec<i64>>,
    vertices: Vec<u32>,
}

impl GeneratorIndex {
    pub(crate) fn new(table: &FacetTable, gens: &PointCloud, vertex_ids: Vec<u32>) -> Result<Self> {
        let f = table.len();
        let values = table.values_of(gens)?;
        let g = gens.len();
        let mut by_facet = Vec::with_capacity(f);
        let mut keys = Vec::with_capacity(f);
        for k in 0..f {
            let mut ids: Vec<u32> = (0..g as u32).collect();
            ids.sort_by_key(|&i| values[i as usize * f + k]);
            keys.push(ids.iter().map(|&i| values[i as usize * f + k]).collect());
            by_facet.push(ids);
        }
        Ok(GeneratorIndex {
            facets: f,
            values,
            by_facet,
            keys,
            vertices: vertex_ids,
        })
    }

    pub(crate) fn facet_values(&self, i: usize) -> &[i64] {
        &self.values[i * self.facets..(i + 1) * self.facets]
    }

    #[inline]
    fn dominated(&self, i: usize, target: &[i64]) -> bool {
        self.facet_values(i)
            .iter()
            .zip(target)
            .all(|(g, t)| g <= t)
    }

    /// Some generator whose facet values are all at most `target`.
    pub(crate) fn find_below(&self, target: &[i64]) -> Option<usize> {
        for &v in &self.vertices {
            if self.dominated(v as usize, target) {
                return Some(v as usize);
            }
        }
        let mut best = (usize::MAX, 0);
        for k in 0..self.facets {
            let count = self.keys[k].partition_point(|&v| v <= target[k]);
            if count < best.0 {
                best = (count, k);
                if count == 0 {
                    return None;
                }
            }
        }
        let (count, k) = best;
        self.by_facet[k][..count]
            .iter()
            .map(|&i| i as usize)
            .find(|&i| self.dominated(i, target))
    }

    /// All generators whose facet values are all at most `target`.
    pub(crate) fn all_below<'a>(&'a self, target: &'a [i64]) -> impl Iterator<Item = usize> + 'a {
        let mut best = (usize::MAX, 0);
        for k in 0..self.facets {
            let count = self.keys[k].partition_point(|&v| v <= target[k]);
            if count < best.0 {
                best = (count, k);
            }
        }
        let (count, k) = best;
        self.by_facet[k][..count]
            .iter()
            .map(|&i| i as usize)
            .filter(move |&i| self.dominated(i, target))
    }
}

pub(crate) fn vertex_positions(p: &CyclicPolytope, gens: &PointCloud) -> Result<Vec<u32>> {
    let mut ids = Vec::with_capacity(p.n());
    for v in p.vertices() {
        let key = v
            .to_i64s()
            .ok_or_else(|| crate::frame::overflow("vertex"))?;
        let pos = (0..gens.len())
            .find(|&i| gens.get(i) == key.as_slice())
            .ok_or_else(|| Error::PostconditionFailed("vertex missing from enumeration".into()))?;
        ids.push(pos as u32);
    }
    Ok(ids)
}

/// Degree-by-degree check of the integer decomposition property for
/// `m = 2..=m_max`. Returns the lexicographically smallest hole at the
/// smallest failing degree.
pub fn idp_check(p: &CyclicPolytope, m_max: Option<u32>, budget: u64) -> Result<IdpVerdict> {
    let m_max = m_max.unwrap_or_else(|| default_m_max(p.d())).max(1);
    let table = FacetTable::new(p)?;
    let gens = enumerate_cloud(p, 1, budget)?;
    let index = GeneratorIndex::new(&table, &gens, vertex_positions(p, &gens)?)?;
    let mut degrees = vec![DegreeCount {
        m: 1,
        points: gens.len(),
    }];
    for m in 2..=m_max {
        let cloud = enumerate_cloud(p, m, budget)?;
        degrees.push(DegreeCount {
            m,
            points: cloud.len(),
        });
        let first_hole = (0..cloud.len())
            .into_par_iter()
            .map_init(Vec::new, |buf, i| -> (usize, Result<bool>) {
                let hole = table
                    .values(cloud.get(i), buf)
                    .map(|_| index.find_below(buf).is_none());
                (i, hole)
            })
            .find_first(|(_, r)| !matches!(r, Ok(false)));
        if let Some((i, r)) = first_hole {
            r?;
            return Ok(IdpVerdict::Hole {
                hole: HoleReport {
                    m,
                    alpha: IntegerVector::from_i64s(cloud.get(i)),
                    reason: HoleReason::NotSumOfLowerDegrees,
                },
                generators: gens.len(),
                degrees,
            });
        }
    }
    Ok(IdpVerdict::Normal {
        m_max,
        generators: gens.len(),
        degrees,
    })
}

/// Independent re-check of a hole: `alpha` lies in `m P*`, and for every
/// degree-1 lattice point `g`, `alpha - g` leaves `(m - 1) P*`.
pub fn revalidate_hole(p: &CyclicPolytope, hole: &HoleReport, budget: u64) -> Result<bool> {
    let m = hole.alpha.degree();
    if *m != num_bigint::BigInt::from(hole.m) || hole.m < 2 || !contains(p, &hole.alpha)? {
        return Ok(false);
    }
    let gens = enumerate_points(p, 1, budget)?;
    for g in &gens.points {
        if contains(p, &(&hole.alpha - g))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of checking every `(d + 1)`-vertex sub-simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CoveringVerdict {
    Verified { simplices: usize },
    Inconclusive { failing: Vec<Vec<usize>> },
}

/// If every `(d + 1)`-vertex sub-simplex is normal, so is `P`. A failing
/// sub-simplex says nothing about `P`, so the result is then inconclusive.
pub fn normality_via_covering(p: &CyclicPolytope, m_max: Option<u32>, budget: u64) -> Result<CoveringVerdict> {
    let all = subsets(p.n(), p.width());
    if all.len() as u64 > budget {
        return Err(Error::InstanceTooLarge {
            what: "sub-simplex covering".into(),
            predicted: all.len() as u128,
            budget,
        });
    }
    let verdicts: Vec<(Vec<usize>, bool)> = all
        .into_par_iter()
        .map(|s| {
            let sub = p.sub_polytope(&s, p.d())?;
            Ok((s, idp_check(&sub, m_max, budget)?.is_normal()))
        })
        .collect::<Result<_>>()?;
    let simplices = verdicts.len();
    let failing: Vec<Vec<usize>> = verdicts
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(s, _)| s)
        .collect();
    if failing.is_empty() {
        Ok(CoveringVerdict::Verified { simplices })
    } else {
        Ok(CoveringVerdict::Inconclusive { failing })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::DEFAULT_BUDGET;
    use std::collections::BTreeSet;

    fn poly(d: usize, taus: &[i64]) -> CyclicPolytope {
        CyclicPolytope::from_i64s(d, taus).unwrap()
    }

    /// Direct oracle: forms all sums of a degree-1 and a degree-(m-1) point.
    fn pairwise_oracle(p: &CyclicPolytope, m_max: u32) -> Option<(u32, IntegerVector)> {
        let one = enumerate_points(p, 1, DEFAULT_BUDGET).unwrap().points;
        for m in 2..=m_max {
            let lower = enumerate_points(p, m - 1, DEFAULT_BUDGET).unwrap().points;
            let sums: BTreeSet<IntegerVector> = one
                .iter()
                .flat_map(|a| lower.iter().map(move |b| a + b))
                .collect();
            let all = enumerate_points(p, m, DEFAULT_BUDGET).unwrap().points;
            if let Some(x) = all.into_iter().find(|x| !sums.contains(x)) {
                return Some((m, x));
            }
        }
        None
    }

    #[test]
    fn small_normal_instances() {
        let p = poly(3, &[0, 1, 2, 3]);
        let v = idp_check(&p, None, DEFAULT_BUDGET).unwrap();
        assert!(v.is_normal(), "{v:?}");
        let q = poly(2, &[0, 1, 3, 7]);
        assert!(idp_check(&q, Some(3), DEFAULT_BUDGET).unwrap().is_normal());
    }

    #[test]
    fn agrees_with_pairwise_oracle() {
        let cases: &[(usize, &[i64], u32)] = &[
            (3, &[0, 1, 2, 3], 2),
            (3, &[0, 1, 3, 4], 3),
            (3, &[0, 1, 2, 3, 5], 2),
            (4, &[0, 1, 2, 3, 4], 3),
            (4, &[0, 1, 2, 4, 5], 3),
            (4, &[0, 2, 3, 5, 6], 3),
            (4, &[0, 1, 3, 5, 6], 3),
            (5, &[0, 1, 2, 3, 4, 5], 2),
        ];
        for &(d, taus, m_max) in cases {
            let p = poly(d, taus);
            let fast = idp_check(&p, Some(m_max), DEFAULT_BUDGET).unwrap();
            let slow = pairwise_oracle(&p, m_max);
            match (&fast, slow) {
                (IdpVerdict::Normal { .. }, None) => {}
                (IdpVerdict::Hole { hole, .. }, Some((m, x))) => {
                    assert_eq!((hole.m, &hole.alpha), (m, &x), "C_{d}{taus:?}");
                    assert!(revalidate_hole(&p, hole, DEFAULT_BUDGET).unwrap());
                }
                (fast, slow) => panic!("C_{d}{taus:?}: {fast:?} vs {slow:?}"),
            }
        }
    }

    #[test]
    fn unit_gap_in_dimension_four_gives_hole() {
        let p = poly(4, &[0, 2, 3, 5, 8]);
        let v = idp_check(&p, None, DEFAULT_BUDGET).unwrap();
        let hole = v.hole().expect("hole");
        assert!(hole.m <= 3);
        assert!(revalidate_hole(&p, hole, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn covering_examples() {
        let p = poly(3, &[0, 1, 2, 3, 4]);
        assert_eq!(
            normality_via_covering(&p, None, DEFAULT_BUDGET).unwrap(),
            CoveringVerdict::Verified { simplices: 5 }
        );
        let s = poly(3, &[0, 1, 2, 3]);
        assert_eq!(
            normality_via_covering(&s, None, DEFAULT_BUDGET).unwrap(),
            CoveringVerdict::Verified { simplices: 1 }
        );
        let bad = poly(4, &[0, 2, 3, 5, 8, 9]);
        match normality_via_covering(&bad, None, DEFAULT_BUDGET).unwrap() {
            CoveringVerdict::Inconclusive { failing } => {
                assert!(failing.contains(&vec![1, 2, 3, 4, 5]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn default_degree_bound() {
        assert_eq!(default_m_max(1), 2);
        assert_eq!(default_m_max(3), 2);
        assert_eq!(default_m_max(4), 3);
        assert_eq!(default_m_max(7), 6);
    }
}
