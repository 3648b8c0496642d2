//! Non-very-ampleness witnesses.
//!
//! For `P = C_4(tau)` with `Delta_23 = 1` the vector
//! `p = b_23 + b_134 + b_12345` lies in the cone spanned by the edge
//! directions `v_j - v_3` but not in the monoid they generate, so
//! `k v_3 + p` is a hole of `P*` for every `k` where it lies in `k P*`.
//! The mirrored case `Delta_{n-2,n-1} = 1` is handled through
//! [`negate_params`]; in higher dimension a unit gap is carried down to
//! dimension 4 through a chain of facets, each again a cyclic polytope.
//!
//! [`verify_witness`] checks a supplied `p` by complete graded search, and
//! [`revalidate_witness`] repeats the check with separate, slower code.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{self, IntegerVector};
use crate::basis::b_vector;
use crate::error::{Error, Result};
use crate::facets::{check_gale_even, oriented_facets, Facet, FacetSet};
use crate::frame::{enumerate_cloud, overflow, Budget, FacetTable, PointCloud, SimplexFrame};
use crate::lattice::{barycentric, enumerate_points};
use crate::normality::GeneratorIndex;
use crate::polytope::{build_polytope, mirror_vector, negate_params, CyclicPolytope, ParameterList};

/// Number of dilation levels `k` checked by default.
pub const DEFAULT_K_MAX: u32 = 3;

/// The lattice points of `P*` translated so that `v_i` sits at the origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftedGeneratorSet {
    pub base_vertex: usize,
    pub vectors: Vec<IntegerVector>,
}

impl ShiftedGeneratorSet {
    pub fn new(p: &CyclicPolytope, base_vertex: usize, budget: u64) -> Result<Self> {
        p.check_index(base_vertex)?;
        let v = p.vertex(base_vertex);
        let vectors = enumerate_points(p, 1, budget)?
            .points
            .iter()
            .map(|x| x - v)
            .collect();
        Ok(ShiftedGeneratorSet {
            base_vertex,
            vectors,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// What the graded search found for `q_k = k v_base + p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LevelStatus {
    /// `q_k` lies in `k P*` and is not a sum of `k` lattice points of `P*`.
    Hole,
    /// `q_k` is not in `k P*`, so it is no hole at this level.
    OutsideDilate,
    /// `q_k` splits; the witness is refuted.
    Decomposes { parts: Vec<IntegerVector> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelCheck {
    pub k: u32,
    pub q: IntegerVector,
    #[serde(flatten)]
    pub status: LevelStatus,
}

/// One reduction step: `facet` of `C_dim(parent)` carries the unit gap,
/// found at position `gap` of the parent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetStep {
    pub parent: ParameterList,
    pub facet: Vec<usize>,
    pub gap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// The explicit vector on `C_4`; `mirrored` means it was built on the
    /// negated parameters and carried back.
    #[serde(rename = "direct_4d")]
    Direct4D { mirrored: bool },
    /// A facet of the input fails to be very ample; `chain` leads to the
    /// 4-dimensional polytope on which `p` lives.
    FacetReduction { chain: Vec<FacetStep>, mirrored: bool },
    /// `p` was given by the caller.
    Supplied,
}

/// Evidence that the polytope on `params` is not very ample: the monoid
/// generated by `P* - v_base` misses `p`, checked for `k = 1..=k_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessFamily {
    pub params: ParameterList,
    pub p: IntegerVector,
    pub base_vertex: usize,
    pub verified_k: Vec<u32>,
    pub levels: Vec<LevelCheck>,
    /// Facets of `P*` with negative value at `v_base + p`.
    pub separating_facets: Vec<Vec<usize>>,
    /// Vertices carrying the rational coefficients of `p`, if known.
    pub support: Vec<usize>,
    #[serde(with = "arith::json_rat_vec")]
    pub coefficients: Vec<BigRational>,
    pub construction: Construction,
}

fn require_unit_gap_23(p: &CyclicPolytope) -> Result<()> {
    if p.d() != 4 {
        return Err(Error::HypothesisViolated(format!("d = {} (need d = 4)", p.d())));
    }
    if !p.delta(2, 3).is_one() {
        return Err(Error::HypothesisViolated(format!(
            "Delta_23 = {} (need 1)",
            p.delta(2, 3)
        )));
    }
    Ok(())
}

/// Coefficients of `b_23 + b_134 + b_12345` over `v_1, ..., v_5` in closed
/// form. Valid for any `C_4` with at least five vertices.
pub fn witness_coefficients(p: &CyclicPolytope) -> Result<Vec<BigRational>> {
    if p.d() != 4 {
        return Err(Error::HypothesisViolated(format!("d = {} (need d = 4)", p.d())));
    }
    let dl = |i, j| arith::int_rat(p.delta(i, j));
    let one = BigRational::one();
    let c1 = (dl(1, 2) * dl(1, 5) + &one) / (dl(1, 2) * dl(1, 3) * dl(1, 4) * dl(1, 5));
    let c2 = (&one - &one / (dl(1, 2) * dl(2, 4) * dl(2, 5))) / dl(2, 3);
    let c3 = -(&one + (dl(2, 3) * dl(3, 5) - &one) / (dl(1, 3) * dl(3, 4) * dl(3, 5))) / dl(2, 3);
    let c4 = (dl(2, 4) * dl(4, 5) - &one) / (dl(1, 4) * dl(2, 4) * dl(3, 4) * dl(4, 5));
    let c5 = &one / (dl(1, 5) * dl(2, 5) * dl(3, 5) * dl(4, 5));
    Ok(vec![c1, c2, c3, c4, c5])
}

/// `p = b_23 + b_134 + b_12345`, checked against the closed-form
/// coefficients. Requires `d = 4` and `Delta_23 = 1`.
pub fn build_witness_p(p: &CyclicPolytope) -> Result<IntegerVector> {
    require_unit_gap_23(p)?;
    let mut sum = IntegerVector::zeros(p.width());
    for s in [&[2, 3][..], &[1, 3, 4], &[1, 2, 3, 4, 5]] {
        sum = &sum + &b_vector(p, s)?.value;
    }
    let coeffs = witness_coefficients(p)?;
    let bc = barycentric(p, &[1, 2, 3, 4, 5], &sum)?;
    if bc.lambdas != coeffs {
        return Err(Error::PostconditionFailed(format!(
            "b-vector sum has coefficients {:?}, closed form {:?}",
            bc.lambdas, coeffs
        )));
    }
    if coeffs[2] >= -BigRational::one() {
        return Err(Error::PostconditionFailed(format!(
            "coefficient of v_3 is {} (expected < -1)",
            coeffs[2]
        )));
    }
    Ok(sum)
}

/// Lattice points `g` of `P*` with `q - g` in `(deg q - 1) P*`.
fn generators_below(p: &CyclicPolytope, table: &FacetTable, q: &IntegerVector, budget: u64) -> Result<PointCloud> {
    let mut out = PointCloud::new(p.width());
    if p.is_simplex() {
        let verts: Vec<usize> = (1..=p.n()).collect();
        let frame = SimplexFrame::new(p, &verts)?;
        let vol = arith::int_rat(&BigInt::from(frame.volume()));
        let caps = barycentric(p, &verts, q)?
            .lambdas
            .iter()
            .map(|l| {
                (l * &vol)
                    .floor()
                    .to_integer()
                    .to_i128()
                    .ok_or_else(|| overflow("barycentric cap"))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut b = Budget::new(budget, "witness generators");
        frame.enumerate_capped(&caps, &mut b, &mut out)?;
        out.sort_dedup();
        return Ok(out);
    }
    let all = enumerate_cloud(p, 1, budget)?;
    let qv = q.to_i64s().ok_or_else(|| overflow("witness target"))?;
    let mut target = Vec::new();
    table.values(&qv, &mut target)?;
    let mut buf = Vec::new();
    for x in all.iter() {
        table.values(x, &mut buf)?;
        if buf.iter().zip(&target).all(|(g, t)| g <= t) {
            out.push(x);
        }
    }
    Ok(out)
}

/// Complete search for `k` lattice points of `P*` summing to a target,
/// carried out on oriented facet values.
struct GradedSearch<'a> {
    gens: &'a PointCloud,
    index: GeneratorIndex,
    by_values: HashMap<Vec<i64>, usize>,
    failed: HashSet<Vec<i64>>,
    budget: Budget,
}

impl<'a> GradedSearch<'a> {
    fn new(table: &FacetTable, gens: &'a PointCloud, budget: u64) -> Result<Self> {
        let index = GeneratorIndex::new(table, gens, Vec::new())?;
        let by_values = (0..gens.len())
            .map(|i| (index.facet_values(i).to_vec(), i))
            .collect();
        Ok(GradedSearch {
            gens,
            index,
            by_values,
            failed: HashSet::new(),
            budget: Budget::new(budget, "graded decomposition search"),
        })
    }

    /// Generator ids summing to the point with facet values `t` and degree `m`.
    fn find(&mut self, t: &[i64], m: u32, out: &mut Vec<usize>) -> Result<bool> {
        if m == 1 {
            return Ok(match self.by_values.get(t) {
                Some(&g) => {
                    out.push(g);
                    true
                }
                None => false,
            });
        }
        if self.failed.contains(t) {
            return Ok(false);
        }
        let cands: Vec<usize> = self.index.all_below(t).collect();
        self.budget.tick(cands.len() as u64 + 1)?;
        let mut child = vec![0i64; t.len()];
        for g in cands {
            for ((c, a), b) in child.iter_mut().zip(t).zip(self.index.facet_values(g)) {
                *c = a - b;
            }
            if self.find(&child, m - 1, out)? {
                out.push(g);
                return Ok(true);
            }
        }
        self.failed.insert(t.to_vec());
        Ok(false)
    }
}

fn check_level(p: &CyclicPolytope, table: &FacetTable, q: &IntegerVector, k: u32, budget: u64) -> Result<LevelStatus> {
    let qv = q.to_i64s().ok_or_else(|| overflow("witness target"))?;
    let mut t = Vec::new();
    table.values(&qv, &mut t)?;
    if t.iter().any(|&v| v < 0) {
        return Ok(LevelStatus::OutsideDilate);
    }
    let gens = generators_below(p, table, q, budget)?;
    let mut search = GradedSearch::new(table, &gens, budget)?;
    let mut ids = Vec::new();
    if search.find(&t, k, &mut ids)? {
        let parts = ids
            .iter()
            .rev()
            .map(|&i| IntegerVector::from_i64s(search.gens.get(i)))
            .collect();
        Ok(LevelStatus::Decomposes { parts })
    } else {
        Ok(LevelStatus::Hole)
    }
}

/// Checks that `p` lies in the cone at `v_base`, that `v_base + p` is not in
/// `P*`, and, for each `k <= k_max`, whether `k v_base + p` is a hole.
/// Fails with [`Error::WitnessRefuted`] if any `q_k` decomposes or no level
/// yields a hole.
pub fn verify_witness(
    p: &CyclicPolytope,
    w: &IntegerVector,
    base_vertex: usize,
    k_max: u32,
    budget: u64,
) -> Result<WitnessFamily> {
    w.check_len(p.width())?;
    p.check_index(base_vertex)?;
    if k_max == 0 {
        return Err(Error::OutOfRange("k_max must be at least 1".into()));
    }
    if !w.degree().is_zero() {
        return Err(Error::WitnessRefuted(format!("p = {w} has nonzero degree")));
    }
    let facets = oriented_facets(p);
    if let Some(f) = facets
        .iter()
        .find(|f| f.set.contains(base_vertex) && f.value(w).is_negative())
    {
        return Err(Error::WitnessRefuted(format!(
            "p is outside the cone at v_{base_vertex}: facet {:?}",
            f.set.indices()
        )));
    }
    let v = p.vertex(base_vertex);
    let q1 = v + w;
    let separating_facets: Vec<Vec<usize>> = facets
        .iter()
        .filter(|f| f.value(&q1).is_negative())
        .map(|f| f.set.indices().to_vec())
        .collect();
    if separating_facets.is_empty() {
        return Err(Error::WitnessRefuted(format!(
            "v_{base_vertex} + p lies in P*, so p is a generator"
        )));
    }
    let table = FacetTable::from_facets(facets)?;
    let levels = (1..=k_max)
        .into_par_iter()
        .map(|k| {
            let q = &v.scaled(&BigInt::from(k)) + w;
            let status = check_level(p, &table, &q, k, budget)?;
            Ok(LevelCheck { k, q, status })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(l) = levels
        .iter()
        .find(|l| matches!(l.status, LevelStatus::Decomposes { .. }))
    {
        return Err(Error::WitnessRefuted(format!("q_{} = {} decomposes", l.k, l.q)));
    }
    let verified_k: Vec<u32> = levels
        .iter()
        .filter(|l| l.status == LevelStatus::Hole)
        .map(|l| l.k)
        .collect();
    if verified_k.is_empty() {
        return Err(Error::WitnessRefuted(format!(
            "no level k <= {k_max} places k v_{base_vertex} + p inside k P*"
        )));
    }
    Ok(WitnessFamily {
        params: p.params().clone(),
        p: w.clone(),
        base_vertex,
        verified_k,
        levels,
        separating_facets,
        support: Vec::new(),
        coefficients: Vec::new(),
        construction: Construction::Supplied,
    })
}

/// The facet `S` of `P*` as the `(d - 1)`-dimensional cyclic polytope on
/// the parameters `tau_i, i in S`.
pub fn facet_subpolytope(p: &CyclicPolytope, s: &FacetSet) -> Result<CyclicPolytope> {
    if p.d() < 2 || !check_gale_even(p, s.indices())? {
        return Err(Error::NotAFacet(s.indices().to_vec()));
    }
    p.sub_polytope(s.indices(), p.d() - 1)
}

/// Smallest `i` in `2..=n-2` with `Delta_{i,i+1} = 1`.
pub fn interior_unit_gap(p: &CyclicPolytope) -> Option<usize> {
    (2..p.n().saturating_sub(1)).find(|&i| p.delta(i, i + 1).is_one())
}

/// The facet used to carry the unit gap at position `j` from dimension `e`
/// to dimension `e - 1`, keeping it at an interior position.
pub fn reduction_facet(e: usize, j: usize) -> Vec<usize> {
    let i = (j + 4).saturating_sub(e).max(2);
    if e % 2 == 1 {
        std::iter::once(1).chain(i..=i + e - 2).collect()
    } else {
        (i - 1..=i + e - 2).collect()
    }
}

/// Descends from `p` to a 4-dimensional cyclic polytope with a unit gap at
/// position 2 or `n - 2`, recording the facets used.
fn reduce_to_dimension_four(p: &CyclicPolytope) -> Result<Option<(CyclicPolytope, Vec<FacetStep>)>> {
    if p.d() < 4 {
        return Err(Error::HypothesisViolated(format!("d = {} (need d >= 4)", p.d())));
    }
    let mut chain = Vec::new();
    let mut cur = p.clone();
    if cur.d() > 4 {
        let Some(mut j) = interior_unit_gap(&cur) else {
            return Ok(None);
        };
        while cur.d() > 4 {
            let facet = reduction_facet(cur.d(), j);
            let set = FacetSet::new(&cur, &facet)?;
            let sub = facet_subpolytope(&cur, &set)
                .map_err(|e| Error::GuaranteeViolated(format!("reduction facet {facet:?}: {e}")))?;
            chain.push(FacetStep {
                parent: cur.params().clone(),
                facet: facet.clone(),
                gap: j,
            });
            j = facet.iter().position(|&x| x == j).expect("gap inside facet") + 1;
            cur = sub;
        }
    }
    let n = cur.n();
    if cur.delta(2, 3).is_one() || cur.delta(n - 2, n - 1).is_one() {
        Ok(Some((cur, chain)))
    } else if chain.is_empty() {
        Ok(None)
    } else {
        Err(Error::GuaranteeViolated("facet chain lost the unit gap".into()))
    }
}

/// Builds and verifies the explicit witness on a 4-dimensional polytope with
/// `Delta_23 = 1` or `Delta_{n-2,n-1} = 1`.
fn witness_in_dimension_four(q: &CyclicPolytope, k_max: u32, budget: u64) -> Result<(WitnessFamily, bool)> {
    let n = q.n();
    if q.delta(2, 3).is_one() {
        let w = build_witness_p(q)?;
        let mut fam = verify_witness(q, &w, 3, k_max, budget)?;
        fam.support = (1..=5).collect();
        fam.coefficients = witness_coefficients(q)?;
        return Ok((fam, false));
    }
    let neg = negate_params(q);
    let w = mirror_vector(&build_witness_p(&neg)?);
    let mut fam = verify_witness(q, &w, n - 2, k_max, budget)?;
    fam.support = (n - 4..=n).collect();
    fam.coefficients = witness_coefficients(&neg)?.into_iter().rev().collect();
    Ok((fam, true))
}

/// A verified witness family when a unit gap sits at an interior position
/// (`2` or `n - 2` for `d = 4`, anywhere in `2..=n-2` for `d >= 5`);
/// `None` otherwise, which says nothing about very ampleness.
pub fn very_ample_obstruction(p: &CyclicPolytope, k_max: u32, budget: u64) -> Result<Option<WitnessFamily>> {
    let Some((q, chain)) = reduce_to_dimension_four(p)? else {
        return Ok(None);
    };
    let (mut fam, mirrored) = witness_in_dimension_four(&q, k_max, budget)?;
    fam.construction = if chain.is_empty() {
        Construction::Direct4D { mirrored }
    } else {
        Construction::FacetReduction { chain, mirrored }
    };
    Ok(Some(fam))
}

/// Re-checks a witness family from its parameters alone, using plain
/// big-integer facet evaluation and an unmemoized search.
pub fn revalidate_witness(fam: &WitnessFamily, budget: u64) -> Result<()> {
    let refuted = |msg: String| Err(Error::WitnessRefuted(msg));
    let p = build_polytope(fam.params.clone());
    fam.p.check_len(p.width())?;
    p.check_index(fam.base_vertex)?;
    if !fam.p.degree().is_zero() {
        return refuted("p has nonzero degree".into());
    }
    let facets = oriented_facets(&p);
    let inside = |x: &IntegerVector| facets.iter().all(|f: &Facet| !f.value(x).is_negative());
    for f in &facets {
        if f.set.contains(fam.base_vertex) && f.value(&fam.p).is_negative() {
            return refuted(format!("p violates facet {:?} at the base vertex", f.set.indices()));
        }
    }
    let v = p.vertex(fam.base_vertex);
    if inside(&(v + &fam.p)) {
        return refuted("v_base + p lies in P*".into());
    }
    if !fam.support.is_empty() {
        let mut acc = arith::RationalVector::zeros(p.width());
        for (i, c) in fam.support.iter().zip(&fam.coefficients) {
            p.check_index(*i)?;
            acc.add_scaled(c, p.vertex(*i));
        }
        if acc != fam.p.to_rational() {
            return refuted("coefficients do not reproduce p".into());
        }
    }
    let gens = enumerate_points(&p, 1, budget)?.points;
    fn splits(q: &IntegerVector, m: u32, gens: &[IntegerVector], inside: &dyn Fn(&IntegerVector) -> bool) -> bool {
        if m == 1 {
            return inside(q);
        }
        gens.iter().any(|g| {
            let r = q - g;
            inside(&r) && splits(&r, m - 1, gens, inside)
        })
    }
    for &k in &fam.verified_k {
        let q = &v.scaled(&BigInt::from(k)) + &fam.p;
        if !inside(&q) {
            return refuted(format!("q_{k} is not in {k} P*"));
        }
        if splits(&q, k, &gens, &inside) {
            return refuted(format!("q_{k} decomposes"));
        }
    }
    if let Construction::FacetReduction { chain, .. } = &fam.construction {
        let mut expected = None;
        for step in chain {
            if let Some(prev) = &expected {
                if prev != &step.parent {
                    return refuted("facet chain is not connected".into());
                }
            }
            let parent = build_polytope(step.parent.clone());
            let set = FacetSet::new(&parent, &step.facet)?;
            let sub = facet_subpolytope(&parent, &set)?;
            expected = Some(sub.params().clone());
        }
        if expected.as_ref() != Some(&fam.params) {
            return refuted("facet chain does not end at the witness polytope".into());
        }
    }
    Ok(())
}

/// Bounded check of the monoid generated by `P* - v_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LocalCertificate {
    /// Every lattice point of `k (P* - v_i)`, `k <= bound`, is a sum of generators.
    CertifiedUpTo { bound: u32 },
    /// `w` lies in `k (P* - v_i)` but not in the monoid.
    HoleFound { k: u32, w: IntegerVector },
}

/// Membership in the monoid generated by shifted lattice points, decided on
/// the values of the facets through the base vertex. Depth-first with an
/// explicit stack; every outcome is cached.
struct MonoidSearch {
    index: GeneratorIndex,
    known: HashMap<Vec<i64>, bool>,
    budget: Budget,
}

struct SearchFrame {
    target: Vec<i64>,
    cands: Vec<usize>,
    pos: usize,
}

enum Next {
    Resolved(bool),
    Descend(Vec<i64>),
}

impl MonoidSearch {
    fn frame(&mut self, target: Vec<i64>) -> Result<SearchFrame> {
        let mut cands: Vec<usize> = self.index.all_below(&target).collect();
        self.budget.tick(cands.len() as u64 + 1)?;
        let weight = |i: usize| -> i64 { self.index.facet_values(i).iter().sum() };
        cands.sort_by_key(|&i| std::cmp::Reverse(weight(i)));
        Ok(SearchFrame {
            target,
            cands,
            pos: 0,
        })
    }

    fn member(&mut self, t: Vec<i64>) -> Result<bool> {
        if let Some(&b) = self.known.get(&t) {
            return Ok(b);
        }
        let first = self.frame(t)?;
        let mut stack = vec![first];
        let mut child_ok = false;
        loop {
            let Some(top) = stack.last_mut() else {
                return Ok(child_ok);
            };
            let next = if child_ok {
                Next::Resolved(true)
            } else {
                let mut next = Next::Resolved(false);
                while top.pos < top.cands.len() {
                    let g = top.cands[top.pos];
                    top.pos += 1;
                    let child: Vec<i64> = top
                        .target
                        .iter()
                        .zip(self.index.facet_values(g))
                        .map(|(a, b)| a - b)
                        .collect();
                    match self.known.get(&child) {
                        Some(true) => {
                            next = Next::Resolved(true);
                            break;
                        }
                        Some(false) => {}
                        None => {
                            next = Next::Descend(child);
                            break;
                        }
                    }
                }
                next
            };
            match next {
                Next::Resolved(ok) => {
                    let done = stack.pop().expect("nonempty");
                    self.known.insert(done.target, ok);
                    child_ok = ok;
                }
                Next::Descend(child) => {
                    let f = self.frame(child)?;
                    stack.push(f);
                    child_ok = false;
                }
            }
        }
    }
}

/// Checks every lattice point `w = y - k v_i`, `y in k P*`, `2 <= k <= bound`,
/// for membership in the monoid generated by `P* - v_i`. Points are visited
/// in lexicographic order of `y` within each `k`.
pub fn vertex_local_certify(p: &CyclicPolytope, i: usize, bound: u32, budget: u64) -> Result<LocalCertificate> {
    p.check_index(i)?;
    if bound == 0 {
        return Err(Error::OutOfRange("degree bound must be at least 1".into()));
    }
    if bound == 1 {
        return Ok(LocalCertificate::CertifiedUpTo { bound });
    }
    let cone: Vec<Facet> = oriented_facets(p)
        .into_iter()
        .filter(|f| f.set.contains(i))
        .collect();
    let table = FacetTable::from_facets(cone)?;
    let v = p
        .vertex(i)
        .to_i64s()
        .ok_or_else(|| overflow("base vertex"))?;
    let mut shifted = PointCloud::new(p.width());
    let mut buf = vec![0i64; p.width()];
    for x in enumerate_cloud(p, 1, budget)?.iter() {
        if x != v.as_slice() {
            for ((b, a), c) in buf.iter_mut().zip(x).zip(&v) {
                *b = a - c;
            }
            shifted.push(&buf);
        }
    }
    let index = GeneratorIndex::new(&table, &shifted, Vec::new())?;
    let mut search = MonoidSearch {
        index,
        known: HashMap::from([(vec![0i64; table.len()], true)]),
        budget: Budget::new(budget, "monoid membership search"),
    };
    let mut vals = Vec::new();
    for k in 2..=bound {
        for y in enumerate_cloud(p, k, budget)?.iter() {
            // Facets through v_i vanish on it, so y and w share their values.
            table.values(y, &mut vals)?;
            if !search.member(vals.clone())? {
                let w: Vec<i64> = y.iter().zip(&v).map(|(a, c)| a - i64::from(k) * c).collect();
                return Ok(LocalCertificate::HoleFound {
                    k,
                    w: IntegerVector::from_i64s(&w),
                });
            }
        }
    }
    Ok(LocalCertificate::CertifiedUpTo { bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::frame::DEFAULT_BUDGET;
    use crate::lattice::contains;
    use crate::normality::idp_check;

    fn poly(d: usize, taus: &[i64]) -> CyclicPolytope {
        CyclicPolytope::from_i64s(d, taus).unwrap()
    }

    #[test]
    fn closed_form_on_the_reference_instance() {
        let p = poly(4, &[0, 2, 3, 5, 8]);
        let c = witness_coefficients(&p).unwrap();
        assert_eq!(c[2], rat(-17, 15));
        assert!(c.iter().sum::<BigRational>().is_zero());
        let w = build_witness_p(&p).unwrap();
        assert!(w.degree().is_zero());
        assert_eq!(w, IntegerVector::from_i64s(&[0, -1, -4, -11, -15]));
    }

    #[test]
    fn build_needs_unit_gap() {
        assert!(matches!(
            build_witness_p(&poly(4, &[0, 1, 3, 5, 8])),
            Err(Error::HypothesisViolated(_))
        ));
        assert!(matches!(
            build_witness_p(&poly(3, &[0, 2, 3, 5])),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn closed_form_matches_b_vectors_without_unit_gap() {
        let p = poly(4, &[-3, 1, 4, 9, 11, 20]);
        let mut sum = IntegerVector::zeros(5);
        for s in [&[2, 3][..], &[1, 3, 4], &[1, 2, 3, 4, 5]] {
            sum = &sum + &b_vector(&p, s).unwrap().value;
        }
        let bc = barycentric(&p, &[1, 2, 3, 4, 5], &sum).unwrap();
        assert_eq!(bc.lambdas, witness_coefficients(&p).unwrap());
    }

    #[test]
    fn reference_witness_levels() {
        let p = poly(4, &[0, 2, 3, 5, 8]);
        let w = build_witness_p(&p).unwrap();
        let fam = verify_witness(&p, &w, 3, 3, DEFAULT_BUDGET).unwrap();
        // v_3 + p has v_3-coefficient 1 - 17/15 < 0, so it is outside P*.
        assert_eq!(fam.levels[0].status, LevelStatus::OutsideDilate);
        assert_eq!(fam.verified_k, vec![2, 3]);
        assert!(fam.separating_facets.contains(&vec![1, 2, 4, 5]));
        let f1245 = Facet::new(&p, FacetSet::new(&p, &[1, 2, 4, 5]).unwrap());
        assert!(f1245.value(&w).is_negative());
        revalidate_witness(&fam, DEFAULT_BUDGET).unwrap();
    }

    #[test]
    fn fake_witness_is_refuted() {
        let p = poly(3, &[0, 1, 2, 3]);
        // A shifted lattice point is a generator, not a hole.
        let x = IntegerVector::from_i64s(&[1, 2, 4, 8]);
        let fake = &x - p.vertex(1);
        assert!(matches!(
            verify_witness(&p, &fake, 1, 3, DEFAULT_BUDGET),
            Err(Error::WitnessRefuted(_))
        ));
        assert!(matches!(
            verify_witness(&p, &x, 1, 1, DEFAULT_BUDGET),
            Err(Error::WitnessRefuted(_))
        ));
    }

    #[test]
    fn obstruction_examples() {
        let p = poly(4, &[0, 2, 3, 5, 8]);
        let fam = very_ample_obstruction(&p, 3, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(fam.construction, Construction::Direct4D { mirrored: false });
        assert_eq!(fam.support, vec![1, 2, 3, 4, 5]);
        assert!(very_ample_obstruction(&poly(4, &[0, 2, 4, 6, 8]), 3, DEFAULT_BUDGET)
            .unwrap()
            .is_none());
        let q = poly(5, &[0, 2, 3, 5, 8, 11]);
        let fam = very_ample_obstruction(&q, 3, DEFAULT_BUDGET).unwrap().unwrap();
        match &fam.construction {
            Construction::FacetReduction { chain, mirrored } => {
                assert_eq!(chain.len(), 1);
                assert_eq!(chain[0].facet, vec![1, 2, 3, 4, 5]);
                assert!(!mirrored);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(fam.params, ParameterList::from_i64s(4, &[0, 2, 3, 5, 8]).unwrap());
        revalidate_witness(&fam, DEFAULT_BUDGET).unwrap();
        assert!(matches!(
            very_ample_obstruction(&poly(3, &[0, 1, 2, 3]), 3, DEFAULT_BUDGET),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn mirrored_instance() {
        // Negation of (0,2,3,5,8): the unit gap moves to position n - 2.
        let p = poly(4, &[-8, -5, -3, -2, 0]);
        let fam = very_ample_obstruction(&p, 3, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(fam.construction, Construction::Direct4D { mirrored: true });
        assert_eq!(fam.base_vertex, 3);
        assert!(fam.separating_facets.contains(&vec![1, 2, 4, 5]));
        assert_eq!(fam.verified_k, vec![2, 3]);
        revalidate_witness(&fam, DEFAULT_BUDGET).unwrap();
        let q = poly(4, &[0, 1, 4, 6, 7, 9]);
        let fam = very_ample_obstruction(&q, 2, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(fam.base_vertex, 4);
        assert_eq!(fam.support, vec![2, 3, 4, 5, 6]);
        revalidate_witness(&fam, DEFAULT_BUDGET).unwrap();
    }

    #[test]
    fn reduction_facets_are_facets() {
        for d in 5..=9usize {
            for n in d + 1..=d + 4 {
                let taus: Vec<i64> = (0..n as i64).map(|t| t * t).collect();
                let p = poly(d, &taus);
                for j in 2..=n - 2 {
                    let f = reduction_facet(d, j);
                    assert_eq!(f.len(), d);
                    assert!(*f.last().unwrap() <= n, "d={d} n={n} j={j}");
                    assert!(check_gale_even(&p, &f).unwrap(), "d={d} n={n} j={j} {f:?}");
                    let pos = f.iter().position(|&x| x == j).unwrap() + 1;
                    assert_eq!(f[pos], j + 1);
                    assert!(pos >= 2 && pos + 2 <= d, "d={d} j={j} {f:?}");
                }
            }
        }
    }

    #[test]
    fn facet_subpolytope_examples() {
        let p = poly(5, &[0, 1, 3, 4, 7, 9, 12]);
        let s = FacetSet::new(&p, &[1, 3, 4, 5, 6]).unwrap();
        let sub = facet_subpolytope(&p, &s).unwrap();
        assert_eq!(sub.params(), &ParameterList::from_i64s(4, &[0, 3, 4, 7, 9]).unwrap());
        assert_eq!(sub.delta(2, 4), p.delta(3, 5));
        let prefix = FacetSet::new(&p, &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(facet_subpolytope(&p, &prefix).unwrap().taus(), &p.taus()[..5]);
        let bad = FacetSet::new(&p, &[2, 3, 4, 6, 7]).unwrap();
        assert!(matches!(facet_subpolytope(&p, &bad), Err(Error::NotAFacet(_))));
    }

    #[test]
    fn shifted_generators_contain_zero() {
        let p = poly(3, &[0, 1, 2, 3]);
        let s = ShiftedGeneratorSet::new(&p, 2, DEFAULT_BUDGET).unwrap();
        assert!(s.vectors.iter().any(IntegerVector::is_zero));
        assert_eq!(s.len(), enumerate_points(&p, 1, DEFAULT_BUDGET).unwrap().count());
    }

    #[test]
    fn local_certification() {
        let p = poly(3, &[0, 1, 2, 3]);
        for i in 1..=4 {
            assert_eq!(
                vertex_local_certify(&p, i, 4, DEFAULT_BUDGET).unwrap(),
                LocalCertificate::CertifiedUpTo { bound: 4 }
            );
        }
        let q = poly(4, &[0, 2, 3, 5, 8]);
        assert_eq!(
            vertex_local_certify(&q, 3, 1, DEFAULT_BUDGET).unwrap(),
            LocalCertificate::CertifiedUpTo { bound: 1 }
        );
        match vertex_local_certify(&q, 3, 2, DEFAULT_BUDGET).unwrap() {
            LocalCertificate::HoleFound { k, w } => {
                assert_eq!(k, 2);
                assert!(contains(&q, &(&w + &q.vertex(3).scaled(&BigInt::from(2)))).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn witness_implies_hole_in_idp_check() {
        for taus in [[0, 2, 3, 5, 8], [0, 1, 2, 4, 7], [0, 3, 4, 6, 7]] {
            let p = poly(4, &taus);
            if very_ample_obstruction(&p, 3, DEFAULT_BUDGET).unwrap().is_some() {
                assert!(!idp_check(&p, None, DEFAULT_BUDGET).unwrap().is_normal(), "{taus:?}");
            }
        }
    }

    #[test]
    fn negation_symmetry() {
        for taus in [[0, 2, 3, 5, 8], [0, 2, 4, 5, 9], [0, 1, 3, 4, 6], [0, 2, 4, 6, 8]] {
            let p = poly(4, &taus);
            let a = very_ample_obstruction(&p, 2, DEFAULT_BUDGET).unwrap();
            let b = very_ample_obstruction(&negate_params(&p), 2, DEFAULT_BUDGET).unwrap();
            assert_eq!(a.is_some(), b.is_some(), "{taus:?}");
            if let (Some(a), Some(b)) = (a, b) {
                assert_eq!(a.base_vertex + b.base_vertex, p.n() + 1);
                assert_eq!(mirror_vector(&a.p), b.p);
            }
        }
    }
}
