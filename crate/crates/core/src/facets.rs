//! Facets of cyclic polytopes: Gale's evenness condition, the monic
//! supporting forms `sigma_S`, and an exhaustive sign-pattern oracle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{self, IntegerVector, RationalVector};
use crate::error::{Error, Result};
use crate::polytope::CyclicPolytope;

/// Largest `n` accepted by [`brute_force_facets`].
pub const BRUTE_FORCE_MAX_N: usize = 12;

/// A sorted set of `d` distinct 1-based vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct FacetSet(Vec<usize>);

impl FacetSet {
    /// Sorts and validates a `d`-subset of `[n]`.
    pub fn new(p: &CyclicPolytope, indices: &[usize]) -> Result<Self> {
        let mut s = indices.to_vec();
        s.sort_unstable();
        if s.len() != p.d() {
            return Err(Error::BadSubset(format!(
                "expected {} indices, got {}",
                p.d(),
                s.len()
            )));
        }
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::BadSubset(format!("repeated index in {s:?}")));
        }
        if s.first() == Some(&0) || s.last().is_some_and(|&i| i > p.n()) {
            return Err(Error::BadSubset(format!(
                "{s:?} not contained in 1..={}",
                p.n()
            )));
        }
        Ok(FacetSet(s))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }
}

/// Coefficients `c_0, ..., c_d` of `prod_{i in S} (t - tau_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct LinearForm {
    #[serde(with = "arith::json_int_vec")]
    pub coeffs: Vec<BigInt>,
}

impl LinearForm {
    pub fn eval_int(&self, x: &IntegerVector) -> BigInt {
        x.dot(&self.coeffs)
    }
}

/// Gale's evenness condition for a `d`-subset.
pub fn is_gale_even(p: &CyclicPolytope, s: &FacetSet) -> bool {
    let mut in_s = vec![false; p.n() + 2];
    for &i in s.indices() {
        in_s[i] = true;
    }
    let mut run = 0usize;
    let mut seen_absent = false;
    for &member in &in_s[1..=p.n()] {
        if member {
            run += 1;
        } else {
            if seen_absent && run % 2 == 1 {
                return false;
            }
            seen_absent = true;
            run = 0;
        }
    }
    true
}

/// Checks the evenness condition on an arbitrary index list, reporting
/// malformed input as [`Error::BadSubset`].
pub fn check_gale_even(p: &CyclicPolytope, indices: &[usize]) -> Result<bool> {
    Ok(is_gale_even(p, &FacetSet::new(p, indices)?))
}

/// All facets in lexicographic order, generated directly from the run
/// structure of the evenness condition.
pub fn enumerate_facets(p: &CyclicPolytope) -> Vec<FacetSet> {
    fn walk(
        pos: usize,
        n: usize,
        d: usize,
        chosen: &mut Vec<usize>,
        run: usize,
        seen_absent: bool,
        out: &mut Vec<FacetSet>,
    ) {
        if chosen.len() == d {
            // Everything after `pos` is absent; an open interior run must be even.
            if pos <= n && seen_absent && run % 2 == 1 {
                return;
            }
            out.push(FacetSet(chosen.clone()));
            return;
        }
        if pos > n || n - pos + 1 < d - chosen.len() {
            return;
        }
        chosen.push(pos);
        walk(pos + 1, n, d, chosen, run + 1, seen_absent, out);
        chosen.pop();
        if !(seen_absent && run % 2 == 1) {
            walk(pos + 1, n, d, chosen, 0, true, out);
        }
    }
    let mut out = Vec::new();
    walk(1, p.n(), p.d(), &mut Vec::new(), 0, false, &mut out);
    out
}

/// The monic form `sigma_S` for any `d`-subset `S`.
pub fn sigma_form(p: &CyclicPolytope, s: &[usize]) -> Result<LinearForm> {
    let set = FacetSet::new(p, s)?;
    Ok(sigma_of(p, set.indices()))
}

/// Monic form for an arbitrary list of at most `d` indices (padded with zeros).
pub(crate) fn sigma_of(p: &CyclicPolytope, s: &[usize]) -> LinearForm {
    let mut coeffs = arith::poly_from_roots(s.iter().map(|&i| p.params().tau(i)));
    coeffs.resize(p.width(), BigInt::zero());
    LinearForm { coeffs }
}

/// Exact evaluation `sum_i c_i x_i`.
pub fn evaluate_sigma(form: &LinearForm, x: &RationalVector) -> Result<BigRational> {
    if x.len() != form.coeffs.len() {
        return Err(Error::DimensionMismatch {
            expected: form.coeffs.len(),
            found: x.len(),
        });
    }
    Ok(x.0
        .iter()
        .zip(&form.coeffs)
        .map(|(a, c)| a * arith::int_rat(c))
        .sum())
}

/// A facet with its supporting form oriented to be nonnegative on the
/// polytope. The monic form itself is nonpositive on `P` when an odd
/// number of facet indices exceed an absent index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub set: FacetSet,
    pub form: LinearForm,
    /// `+1` or `-1`.
    pub orientation: i8,
}

impl Facet {
    pub fn new(p: &CyclicPolytope, set: FacetSet) -> Self {
        let form = sigma_of(p, set.indices());
        let outside = (1..=p.n())
            .find(|i| !set.contains(*i))
            .expect("a facet misses at least one vertex");
        let above = set.indices().iter().filter(|&&i| i > outside).count();
        let orientation = if above % 2 == 0 { 1 } else { -1 };
        Facet {
            set,
            form,
            orientation,
        }
    }

    /// Oriented value: nonnegative exactly on the closed half-space of `P`.
    pub fn value(&self, x: &IntegerVector) -> BigInt {
        let v = self.form.eval_int(x);
        if self.orientation < 0 {
            -v
        } else {
            v
        }
    }

    pub fn value_rational(&self, x: &RationalVector) -> BigRational {
        let v: BigRational = x
            .0
            .iter()
            .zip(&self.form.coeffs)
            .map(|(a, c)| a * arith::int_rat(c))
            .sum();
        if self.orientation < 0 {
            -v
        } else {
            v
        }
    }

    /// Oriented coefficients.
    pub fn oriented_coeffs(&self) -> Vec<BigInt> {
        self.form
            .coeffs
            .iter()
            .map(|c| if self.orientation < 0 { -c } else { c.clone() })
            .collect()
    }
}

/// All facets with oriented forms, in lexicographic order.
pub fn oriented_facets(p: &CyclicPolytope) -> Vec<Facet> {
    enumerate_facets(p)
        .into_iter()
        .map(|s| Facet::new(p, s))
        .collect()
}

/// Exhaustive oracle: every `d`-subset whose form takes a single sign on all
/// vertices, with at least one strict value.
pub fn brute_force_facets(p: &CyclicPolytope) -> Result<Vec<FacetSet>> {
    let (n, d) = (p.n(), p.d());
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::InstanceTooLarge {
            what: "exhaustive facet scan".into(),
            predicted: binomial(n, d),
            budget: binomial(BRUTE_FORCE_MAX_N, BRUTE_FORCE_MAX_N / 2) as u64,
        });
    }
    let mut out = Vec::new();
    for subset in subsets(n, d) {
        let form = sigma_of(p, &subset);
        let (mut pos, mut neg) = (false, false);
        for v in p.vertices() {
            let s = form.eval_int(v);
            pos |= s.is_positive();
            neg |= s.is_negative();
        }
        if pos != neg {
            out.push(FacetSet(subset));
        }
    }
    Ok(out)
}

/// All `k`-subsets of `[n]` (1-based), in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..k).rev().find(|&i| cur[i] < n - k + i + 1) else {
            return out;
        };
        cur[pos] += 1;
        for i in pos + 1..k {
            cur[i] = cur[i - 1] + 1;
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
