//! Machine-integer workspace for lattice-point enumeration.
//!
//! Each simplex is enumerated in its own triangular frame: after the change
//! of basis `y = x U` the vertex rows become lower triangular, so the
//! barycentric coordinates can be fixed one coordinate at a time from the
//! last column down, each step giving an exact integer interval for `y_c`.
//! Every intermediate is checked; overflow is reported as
//! [`Error::InstanceTooLarge`] rather than wrapping.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::facets::{oriented_facets, Facet};
use crate::polytope::{newton_matrix, CyclicPolytope};
use crate::{arith, facets};

/// Default number of candidate evaluations allowed per enumeration call.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Counts candidate evaluations against a limit.
#[derive(Clone, Debug)]
pub(crate) struct Budget {
    limit: u64,
    used: u64,
    what: &'static str,
}

impl Budget {
    pub(crate) fn new(limit: u64, what: &'static str) -> Self {
        Budget {
            limit,
            used: 0,
            what,
        }
    }

    pub(crate) fn check_prediction(&self, predicted: u128) -> Result<()> {
        if predicted > self.limit as u128 {
            return Err(self.error(predicted));
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn tick(&mut self, n: u64) -> Result<()> {
        self.used += n;
        if self.used > self.limit {
            return Err(self.error(self.used as u128));
        }
        Ok(())
    }

    fn error(&self, predicted: u128) -> Error {
        Error::InstanceTooLarge {
            what: self.what.to_string(),
            predicted,
            budget: self.limit,
        }
    }
}

pub(crate) fn overflow(what: &str) -> Error {
    Error::InstanceTooLarge {
        what: format!("{what} exceeds 64-bit range"),
        predicted: u128::MAX,
        budget: 0,
    }
}

pub(crate) fn to_i128(x: &BigInt, what: &str) -> Result<i128> {
    x.to_i128().ok_or_else(|| overflow(what))
}

/// Flat storage for many small integer vectors of equal width.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct PointCloud {
    pub width: usize,
    pub data: Vec<i64>,
}

impl PointCloud {
    pub fn new(width: usize) -> Self {
        PointCloud {
            width,
            data: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.width
    }

    pub fn get(&self, i: usize) -> &[i64] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn push(&mut self, x: &[i64]) {
        self.data.extend_from_slice(x);
    }

    pub fn iter(&self) -> impl Iterator<Item = &[i64]> {
        self.data.chunks_exact(self.width)
    }

    /// Sorts lexicographically and removes duplicates.
    pub fn sort_dedup(&mut self) {
        let w = self.width;
        let mut rows: Vec<&[i64]> = self.data.chunks_exact(w).collect();
        rows.sort_unstable();
        rows.dedup();
        let data = rows.concat();
        self.data = data;
    }
}

/// One simplex of a triangulation in its own triangular frame.
#[derive(Clone, Debug)]
pub(crate) struct SimplexFrame {
    d: usize,
    rows: Vec<Vec<i128>>,
    vol: i128,
    inv: Vec<Vec<i128>>,
}

impl SimplexFrame {
    /// Frame for the simplex on the given sorted 1-based vertex indices.
    pub fn new(p: &CyclicPolytope, verts: &[usize]) -> Result<Self> {
        let d = p.d();
        let nodes: Vec<BigInt> = verts.iter().map(|&i| p.params().tau(i).clone()).collect();
        let u = newton_matrix(&nodes, d);
        let inv = arith::unit_upper_inverse(&u);
        let rows = verts
            .iter()
            .map(|&i| {
                arith::row_times_matrix(&p.vertex(i).0, &u)
                    .iter()
                    .map(|v| to_i128(v, "frame entry"))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut vol: i128 = 1;
        for (r, row) in rows.iter().enumerate() {
            vol = vol
                .checked_mul(row[r])
                .ok_or_else(|| overflow("simplex volume"))?;
        }
        let inv = inv
            .iter()
            .map(|row| row.iter().map(|v| to_i128(v, "inverse frame")).collect())
            .collect::<Result<Vec<_>>>()?;
        Ok(SimplexFrame { d, rows, vol, inv })
    }

    pub fn volume(&self) -> i128 {
        self.vol
    }

    /// Appends every lattice point of `m` times the simplex, in original
    /// coordinates.
    pub fn enumerate(&self, m: i64, budget: &mut Budget, out: &mut PointCloud) -> Result<()> {
        let w = self.d + 1;
        if m == 0 {
            out.push(&vec![0; w]);
            return Ok(());
        }
        let mut y = vec![0i128; w];
        let mut n = vec![0i128; w];
        y[0] = m as i128;
        let rest = (m as i128)
            .checked_mul(self.vol)
            .ok_or_else(|| overflow("scaled volume"))?;
        let mut x = vec![0i64; w];
        self.walk(self.d, rest, None, &mut y, &mut n, &mut x, budget, out)
    }

    /// Lattice points of the simplex (degree 1) whose scaled barycentric
    /// coordinates `lambda_r * volume` are at most `caps[r]`.
    pub fn enumerate_capped(&self, caps: &[i128], budget: &mut Budget, out: &mut PointCloud) -> Result<()> {
        let w = self.d + 1;
        debug_assert_eq!(caps.len(), w);
        let mut y = vec![0i128; w];
        let mut n = vec![0i128; w];
        y[0] = 1;
        let mut x = vec![0i64; w];
        self.walk(self.d, self.vol, Some(caps), &mut y, &mut n, &mut x, budget, out)
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        c: usize,
        rest: i128,
        caps: Option<&[i128]>,
        y: &mut [i128],
        n: &mut [i128],
        x: &mut [i64],
        budget: &mut Budget,
        out: &mut PointCloud,
    ) -> Result<()> {
        let mut a: i128 = 0;
        for r in c + 1..=self.d {
            let t = n[r]
                .checked_mul(self.rows[r][c])
                .ok_or_else(|| overflow("frame accumulator"))?;
            a = a.checked_add(t).ok_or_else(|| overflow("frame accumulator"))?;
        }
        let diag = self.rows[c][c];
        let top = rest
            .checked_mul(diag)
            .and_then(|t| t.checked_add(a))
            .ok_or_else(|| overflow("frame bound"))?;
        let top = match caps {
            Some(caps) => caps[c]
                .checked_mul(diag)
                .and_then(|t| t.checked_add(a))
                .ok_or_else(|| overflow("frame bound"))?
                .min(top),
            None => top,
        };
        let lo = ceil_div(a, self.vol);
        let hi = top.div_euclid(self.vol);
        if hi < lo {
            return Ok(());
        }
        budget.tick((hi - lo + 1) as u64)?;
        for yc in lo..=hi {
            y[c] = yc;
            let num = yc * self.vol - a;
            debug_assert_eq!(num % diag, 0);
            n[c] = num / diag;
            if c == 1 {
                if caps.is_none_or(|caps| rest - n[c] <= caps[0]) {
                    self.emit(y, x, out)?;
                }
            } else {
                self.walk(c - 1, rest - n[c], caps, y, n, x, budget, out)?;
            }
        }
        Ok(())
    }

    fn emit(&self, y: &[i128], x: &mut [i64], out: &mut PointCloud) -> Result<()> {
        for (k, xk) in x.iter_mut().enumerate() {
            let mut s: i128 = 0;
            for (c, yc) in y.iter().enumerate().take(k + 1) {
                s = s
                    .checked_add(
                        yc.checked_mul(self.inv[c][k])
                            .ok_or_else(|| overflow("lattice point"))?,
                    )
                    .ok_or_else(|| overflow("lattice point"))?;
            }
            *xk = i64::try_from(s).map_err(|_| overflow("lattice point"))?;
        }
        out.push(x);
        Ok(())
    }
}

fn ceil_div(a: i128, b: i128) -> i128 {
    -((-a).div_euclid(b))
}

/// Vertex sets of a pulling triangulation from vertex 1: the simplex itself,
/// or `{1} + F` for every facet `F` not containing vertex 1.
pub(crate) fn triangulation(p: &CyclicPolytope) -> Vec<Vec<usize>> {
    if p.is_simplex() {
        return vec![(1..=p.n()).collect()];
    }
    facets::enumerate_facets(p)
        .into_iter()
        .filter(|f| !f.contains(1))
        .map(|f| {
            let mut s = vec![1];
            s.extend_from_slice(f.indices());
            s
        })
        .collect()
}

/// Estimated number of lattice points of `m P`, summed over the
/// triangulation: `vol * m^d / d!` plus the vertices.
pub(crate) fn predicted_points(p: &CyclicPolytope, m: u32) -> u128 {
    let d = p.d() as u32;
    let fact: f64 = (1..=d).map(f64::from).product();
    let scale = f64::from(m).powi(d as i32) / fact;
    triangulation(p)
        .iter()
        .map(|s| {
            let v = p.simplex_volume(s).to_f64().unwrap_or(f64::INFINITY);
            let est = v * scale + (p.d() + 1) as f64;
            if est.is_finite() && est < 1e30 {
                est as u128
            } else {
                u128::MAX / 4
            }
        })
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// All lattice points of `m P*`, sorted and deduplicated.
pub(crate) fn enumerate_cloud(p: &CyclicPolytope, m: u32, limit: u64) -> Result<PointCloud> {
    let mut budget = Budget::new(limit, "lattice point enumeration");
    budget.check_prediction(predicted_points(p, m))?;
    let mut out = PointCloud::new(p.width());
    for s in triangulation(p) {
        let frame = SimplexFrame::new(p, &s)?;
        frame.enumerate(i64::from(m), &mut budget, &mut out)?;
    }
    out.sort_dedup();
    Ok(out)
}

/// Oriented facet forms in machine integers.
#[derive(Clone, Debug)]
pub(crate) struct FacetTable {
    coeffs: Vec<Vec<i64>>,
}

impl FacetTable {
    pub fn new(p: &CyclicPolytope) -> Result<Self> {
        Self::from_facets(oriented_facets(p))
    }

    pub fn from_facets(facets: Vec<Facet>) -> Result<Self> {
        let coeffs = facets
            .iter()
            .map(|f| {
                f.oriented_coeffs()
                    .iter()
                    .map(|c| c.to_i64().ok_or_else(|| overflow("facet coefficient")))
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(FacetTable { coeffs })
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Oriented facet values of `x`.
    pub fn values(&self, x: &[i64], out: &mut Vec<i64>) -> Result<()> {
        out.clear();
        for c in &self.coeffs {
            let mut s: i128 = 0;
            for (a, b) in c.iter().zip(x) {
                s += i128::from(*a) * i128::from(*b);
            }
            out.push(i64::try_from(s).map_err(|_| overflow("facet value"))?);
        }
        Ok(())
    }

    /// Facet values of every point in `cloud`, flattened.
    pub fn values_of(&self, cloud: &PointCloud) -> Result<Vec<i64>> {
        let mut all = Vec::with_capacity(cloud.len() * self.len());
        let mut buf = Vec::with_capacity(self.len());
        for x in cloud.iter() {
            self.values(x, &mut buf)?;
            all.extend_from_slice(&buf);
        }
        Ok(all)
    }
}
