//! Exhaustive sweeps over small parameter ranges.
//!
//! Instances are `C_d(0, tau_2, ..., tau_n)` with `tau_n <= tau_max`.
//! Translation fixes `tau_1 = 0`, and negation reverses the gap sequence, so
//! only the instance whose gaps are lexicographically no larger than their
//! reverse is run; its mirror is reported alongside.

use std::fmt;
use std::str::FromStr;

use cyclic_lattice::normality::{idp_check, revalidate_hole, HoleReport, IdpVerdict};
use cyclic_lattice::veryample::{revalidate_witness, very_ample_obstruction, vertex_local_certify};
use cyclic_lattice::{CyclicPolytope, Error, LocalCertificate, Result, WitnessFamily};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Degree-by-degree decomposition check against the expected verdict.
    Normality,
    /// Witness construction, cross-checked against the decomposition check.
    VeryAmple,
    /// Normality is preserved when every gap grows.
    Monotonicity,
    /// Bounded monoid certification at every vertex against normality.
    VeryAmpleImpliesNormal,
}

impl FromStr for CheckKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "normality" => Ok(CheckKind::Normality),
            "very-ample" => Ok(CheckKind::VeryAmple),
            "monotonicity" => Ok(CheckKind::Monotonicity),
            "very-ample-implies-normal" => Ok(CheckKind::VeryAmpleImpliesNormal),
            other => Err(format!(
                "unknown check {other:?} (normality, very-ample, monotonicity, very-ample-implies-normal)"
            )),
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CheckKind::Normality => "normality",
            CheckKind::VeryAmple => "very-ample",
            CheckKind::Monotonicity => "monotonicity",
            CheckKind::VeryAmpleImpliesNormal => "very-ample-implies-normal",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepSpec {
    pub d: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub tau_max: i64,
    pub check: CheckKind,
    pub budget: u64,
    pub seed: u64,
    pub m_max: Option<u32>,
    pub k_max: u32,
    pub local_bound: u32,
}

impl SweepSpec {
    pub fn new(d: usize, n: usize, tau_max: i64, check: CheckKind) -> Self {
        SweepSpec {
            d,
            n_min: n,
            n_max: n,
            tau_max,
            check,
            budget: cyclic_lattice::DEFAULT_BUDGET,
            seed: 0,
            m_max: None,
            k_max: cyclic_lattice::veryample::DEFAULT_K_MAX,
            local_bound: 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::ZeroDimension);
        }
        if self.budget == 0 || self.k_max == 0 || self.local_bound == 0 {
            return Err(Error::OutOfRange("budgets and bounds must be positive".into()));
        }
        if self.n_min < self.d + 1 {
            return Err(Error::TooFewVertices {
                d: self.d,
                n: self.n_min,
            });
        }
        if self.tau_max < 0 {
            return Err(Error::OutOfRange("tau_max must be nonnegative".into()));
        }
        if matches!(self.check, CheckKind::VeryAmple) && self.d < 4 {
            return Err(Error::HypothesisViolated("very-ample sweeps need d >= 4".into()));
        }
        Ok(())
    }
}

/// Outcome of the decomposition check, without per-degree counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NormalityOutcome {
    Normal,
    Hole { hole: HoleReport },
    Guarded { reason: String },
}

impl NormalityOutcome {
    fn from_result(r: Result<IdpVerdict>) -> Result<Self> {
        match r {
            Ok(IdpVerdict::Normal { .. }) => Ok(NormalityOutcome::Normal),
            Ok(IdpVerdict::Hole { hole, .. }) => Ok(NormalityOutcome::Hole { hole }),
            Err(e @ Error::InstanceTooLarge { .. }) => Ok(NormalityOutcome::Guarded {
                reason: e.to_string(),
            }),
            Err(e) => Err(e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceResult {
    pub tau: Vec<i64>,
    /// The negated instance, translated to start at 0.
    pub mirror_tau: Vec<i64>,
    /// Some `Delta_{i,i+1} = 1` with `2 <= i <= n - 2`.
    pub interior_unit_gap: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normality: Option<NormalityOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub local: Option<Vec<LocalCertificate>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub tau: Vec<i64>,
    pub reason: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hole: Option<HoleReport>,
    /// The normal instance dominated by `tau` in a monotonicity pair.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub smaller: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessFamily>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub instances: usize,
    pub normal: usize,
    pub holes: usize,
    pub witnesses: usize,
    pub guarded: usize,
    pub errors: usize,
    pub counterexamples: usize,
}

/// Bounded local certification against the decomposition check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CrossTab {
    pub certified_normal: usize,
    pub certified_hole: usize,
    pub local_hole_normal: usize,
    pub local_hole_hole: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub spec: SweepSpec,
    pub instances: Vec<InstanceResult>,
    pub counterexamples: Vec<Counterexample>,
    pub totals: Totals,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs_checked: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crosstab: Option<CrossTab>,
}

fn gaps(tau: &[i64]) -> Vec<i64> {
    tau.windows(2).map(|w| w[1] - w[0]).collect()
}

fn from_gaps(g: &[i64]) -> Vec<i64> {
    let mut tau = vec![0];
    for x in g {
        tau.push(tau.last().expect("nonempty") + x);
    }
    tau
}

fn mirror_tau(tau: &[i64]) -> Vec<i64> {
    let mut g = gaps(tau);
    g.reverse();
    from_gaps(&g)
}

/// Parameter tuples `0 = tau_1 < ... < tau_n <= tau_max`, one per negation
/// class, in lexicographic order.
pub fn canonical_instances(n: usize, tau_max: i64) -> Vec<Vec<i64>> {
    fn extend(cur: &mut Vec<i64>, n: usize, tau_max: i64, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            let g = gaps(cur);
            let mut r = g.clone();
            r.reverse();
            if g <= r {
                out.push(cur.clone());
            }
            return;
        }
        let last = *cur.last().expect("nonempty");
        let remaining = (n - cur.len()) as i64;
        for t in last + 1..=tau_max - remaining + 1 {
            cur.push(t);
            extend(cur, n, tau_max, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    extend(&mut vec![0], n, tau_max, &mut out);
    out
}

fn interior_unit_gap(tau: &[i64]) -> bool {
    let n = tau.len();
    (2..n.saturating_sub(1)).any(|i| tau[i] - tau[i - 1] == 1)
}

/// Verdict predicted from the gap pattern, where a prediction exists.
fn expected_normal(d: usize, tau: &[i64]) -> Option<bool> {
    let unit = interior_unit_gap(tau);
    match d {
        3 => Some(true),
        4 => Some(!unit),
        _ if d >= 5 && unit => Some(false),
        _ => None,
    }
}

fn polytope(d: usize, tau: &[i64]) -> Result<CyclicPolytope> {
    CyclicPolytope::from_i64s(d, tau)
}

fn run_instance(spec: &SweepSpec, tau: &[i64]) -> InstanceResult {
    let mut res = InstanceResult {
        tau: tau.to_vec(),
        mirror_tau: mirror_tau(tau),
        interior_unit_gap: interior_unit_gap(tau),
        normality: None,
        witness: None,
        local: None,
        error: None,
    };
    if let Err(e) = fill_instance(spec, tau, &mut res) {
        res.error = Some(e.to_string());
    }
    res
}

fn fill_instance(spec: &SweepSpec, tau: &[i64], res: &mut InstanceResult) -> Result<()> {
    let p = polytope(spec.d, tau)?;
    let normality = |p: &CyclicPolytope| NormalityOutcome::from_result(idp_check(p, spec.m_max, spec.budget));
    match spec.check {
        CheckKind::Normality | CheckKind::Monotonicity => {
            res.normality = Some(normality(&p)?);
        }
        CheckKind::VeryAmple => {
            res.witness = very_ample_obstruction(&p, spec.k_max, spec.budget)?;
            res.normality = Some(normality(&p)?);
        }
        CheckKind::VeryAmpleImpliesNormal => {
            let local = (1..=p.n())
                .map(|i| vertex_local_certify(&p, i, spec.local_bound, spec.budget))
                .collect::<Result<Vec<_>>>();
            match local {
                Ok(l) => res.local = Some(l),
                Err(e @ Error::InstanceTooLarge { .. }) => {
                    res.normality = Some(NormalityOutcome::Guarded {
                        reason: e.to_string(),
                    });
                    return Ok(());
                }
                Err(e) => return Err(e),
            }
            res.normality = Some(normality(&p)?);
        }
    }
    Ok(())
}

fn dominated(small: &[i64], big: &[i64]) -> bool {
    small.len() == big.len() && small.iter().zip(big).all(|(a, b)| a <= b) && small != big
}

/// Runs the sweep. Per-instance failures are recorded, never fatal.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    spec.validate()?;
    let taus: Vec<Vec<i64>> = (spec.n_min..=spec.n_max)
        .flat_map(|n| canonical_instances(n, spec.tau_max))
        .collect();
    let instances: Vec<InstanceResult> = taus.par_iter().map(|t| run_instance(spec, t)).collect();

    let mut totals = Totals {
        instances: instances.len(),
        ..Totals::default()
    };
    let mut counterexamples = Vec::new();
    let mut crosstab = None;
    let mut pairs_checked = None;

    for r in &instances {
        if r.error.is_some() {
            totals.errors += 1;
        }
        if r.witness.is_some() {
            totals.witnesses += 1;
        }
        match &r.normality {
            Some(NormalityOutcome::Normal) => totals.normal += 1,
            Some(NormalityOutcome::Hole { .. }) => totals.holes += 1,
            Some(NormalityOutcome::Guarded { .. }) => totals.guarded += 1,
            None => {}
        }
    }

    match spec.check {
        CheckKind::Normality => {
            for r in &instances {
                let Some(expect) = expected_normal(spec.d, &r.tau) else {
                    continue;
                };
                match (&r.normality, expect) {
                    (Some(NormalityOutcome::Hole { hole }), true) => counterexamples.push(Counterexample {
                        tau: r.tau.clone(),
                        reason: "expected normal, found a hole".into(),
                        hole: Some(hole.clone()),
                        smaller: None,
                        witness: None,
                    }),
                    (Some(NormalityOutcome::Normal), false) => counterexamples.push(Counterexample {
                        tau: r.tau.clone(),
                        reason: "interior unit gap, yet no hole up to m_max".into(),
                        hole: None,
                        smaller: None,
                        witness: None,
                    }),
                    _ => {}
                }
            }
        }
        CheckKind::VeryAmple => {
            for r in &instances {
                match (&r.witness, &r.normality) {
                    (Some(w), Some(NormalityOutcome::Normal)) => counterexamples.push(Counterexample {
                        tau: r.tau.clone(),
                        reason: "witness found but the decomposition check reports normal".into(),
                        hole: None,
                        smaller: None,
                        witness: Some(w.clone()),
                    }),
                    (None, _) if r.interior_unit_gap && r.error.is_none() => {
                        counterexamples.push(Counterexample {
                            tau: r.tau.clone(),
                            reason: "interior unit gap but no witness".into(),
                            hole: None,
                            smaller: None,
                            witness: None,
                        })
                    }
                    _ => {}
                }
            }
        }
        CheckKind::Monotonicity => {
            let normal: Vec<Vec<i64>> = instances
                .iter()
                .filter(|r| r.normality == Some(NormalityOutcome::Normal))
                .map(|r| gaps(&r.tau))
                .collect();
            let mut pairs = 0u64;
            for r in &instances {
                let g = gaps(&r.tau);
                let mut rg = g.clone();
                rg.reverse();
                let below: Vec<&Vec<i64>> = normal
                    .iter()
                    .filter(|s| dominated(s, &g) || dominated(s, &rg))
                    .collect();
                pairs += below.len() as u64;
                if let (Some(NormalityOutcome::Hole { hole }), Some(s)) = (&r.normality, below.first()) {
                    counterexamples.push(Counterexample {
                        tau: r.tau.clone(),
                        reason: "gaps dominate a normal instance, yet a hole exists".into(),
                        hole: Some(hole.clone()),
                        smaller: Some(from_gaps(s)),
                        witness: None,
                    });
                }
            }
            pairs_checked = Some(pairs);
        }
        CheckKind::VeryAmpleImpliesNormal => {
            let mut tab = CrossTab::default();
            for r in &instances {
                let (Some(local), Some(n)) = (&r.local, &r.normality) else {
                    continue;
                };
                let certified = local
                    .iter()
                    .all(|c| matches!(c, LocalCertificate::CertifiedUpTo { .. }));
                match (certified, n) {
                    (true, NormalityOutcome::Normal) => tab.certified_normal += 1,
                    (true, NormalityOutcome::Hole { hole }) => {
                        tab.certified_hole += 1;
                        counterexamples.push(Counterexample {
                            tau: r.tau.clone(),
                            reason: format!(
                                "every vertex monoid certified up to degree {}, yet a hole exists",
                                spec.local_bound
                            ),
                            hole: Some(hole.clone()),
                            smaller: None,
                            witness: None,
                        });
                    }
                    (false, NormalityOutcome::Normal) => tab.local_hole_normal += 1,
                    (false, NormalityOutcome::Hole { .. }) => tab.local_hole_hole += 1,
                    (_, NormalityOutcome::Guarded { .. }) => {}
                }
            }
            crosstab = Some(tab);
        }
    }
    totals.counterexamples = counterexamples.len();
    Ok(SweepReport {
        spec: spec.clone(),
        instances,
        counterexamples,
        totals,
        pairs_checked,
        crosstab,
    })
}

/// Re-checks the certificate embedded in a counterexample with the
/// independent validators. Entries without a certificate return `false`.
pub fn revalidate_counterexample(spec: &SweepSpec, c: &Counterexample) -> Result<bool> {
    if let Some(hole) = &c.hole {
        let p = polytope(spec.d, &c.tau)?;
        return revalidate_hole(&p, hole, spec.budget);
    }
    if let Some(w) = &c.witness {
        return Ok(revalidate_witness(w, spec.budget).is_ok());
    }
    Ok(false)
}

/// True when the gap list is its own mirror image.
pub fn is_self_mirror(tau: &[i64]) -> bool {
    mirror_tau(tau) == tau
}
