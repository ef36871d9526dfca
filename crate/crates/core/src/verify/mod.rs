//! Exact verification of the dimension-vector bound `v_i <= n delta_i` for
//! `theta_J`-stable modules.
//!
//! Stability forces, at every unframed vertex `i` outside `J`, the local
//! inequality `2 v_i <= sum over arrows into i of v_tail`. With `v_inf = 1`
//! and `v_j = n delta_j` pinned on `J`, these inequalities cut out a bounded
//! polytope. We enumerate every integer point of it and check the bound.
//! This is stronger than the statement about stable modules: any integer
//! point violating the bound would show the local inequalities alone do not
//! suffice, not that a stable module with that dimension vector exists.
//!
//! The framing vertex carries no inequality: a stable module has `b* = 0`,
//! so the map into `V_inf` is never surjective and the local argument does
//! not apply there.

mod enumerate;
pub mod lp;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Face;
use crate::linalg::rational::{self, Rational};
use crate::quiver::{build_framed_quiver, DynkinType, Vertex};
use enumerate::Interval;
use lp::LpOutcome;

/// `sum_k coeffs[k] * v_{unknowns[k]} <= bound`, the local inequality at
/// `vertex` after substituting the pinned values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub vertex: usize,
    pub coeffs: Vec<i64>,
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub kind: DynkinType,
    pub n: usize,
    pub face: Face,
    /// Unframed vertices outside `J`, ascending. Variable `k` is
    /// `v_{unknowns[k]}`.
    pub unknowns: Vec<usize>,
    pub pinned: BTreeMap<Vertex, i64>,
    pub inequalities: Vec<Inequality>,
    /// `n delta_i` for each unknown.
    pub targets: Vec<i64>,
}

impl ConstraintSystem {
    pub fn position(&self, vertex: usize) -> Result<usize> {
        self.unknowns
            .iter()
            .position(|&u| u == vertex)
            .ok_or(Error::NotAnUnknown(vertex))
    }

    pub fn satisfied_by(&self, point: &[i64]) -> bool {
        point.iter().all(|&x| x >= 0)
            && self
                .inequalities
                .iter()
                .all(|q| q.coeffs.iter().zip(point).map(|(a, x)| a * x).sum::<i64>() <= q.bound)
    }

    /// The point `v_i = n delta_i`, always feasible.
    pub fn regular_point(&self) -> Vec<i64> {
        self.targets.clone()
    }
}

impl fmt::Display for ConstraintSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in &self.inequalities {
            let mut lhs = String::new();
            for (k, &a) in q.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let sign = if a < 0 {
                    "-"
                } else if lhs.is_empty() {
                    ""
                } else {
                    "+"
                };
                let mag = a.abs();
                let term = if mag == 1 {
                    format!("v{}", self.unknowns[k])
                } else {
                    format!("{mag}*v{}", self.unknowns[k])
                };
                if lhs.is_empty() {
                    lhs = format!("{sign}{term}");
                } else {
                    lhs = format!("{lhs} {sign} {term}");
                }
            }
            writeln!(f, "[v{}] {lhs} <= {}", q.vertex, q.bound)?;
        }
        Ok(())
    }
}

pub fn build_system(kind: DynkinType, n: usize, face: &Face) -> Result<ConstraintSystem> {
    if face.is_empty() {
        return Err(Error::EmptyFace);
    }
    face.validate(kind)?;
    let q = build_framed_quiver(kind);
    let delta = q.delta();
    let unknowns: Vec<usize> = (0..=kind.rank()).filter(|&i| !face.contains(i)).collect();
    let mut pinned = BTreeMap::new();
    pinned.insert(Vertex::Infinity, 1i64);
    for j in face.iter() {
        pinned.insert(Vertex::Node(j), (n as u64 * delta[j]) as i64);
    }
    let inequalities = unknowns
        .iter()
        .map(|&i| {
            let mut coeffs = vec![0i64; unknowns.len()];
            coeffs[unknowns.iter().position(|&u| u == i).expect("own vertex")] += 2;
            let mut bound = 0i64;
            for (nbr, mult) in q.weighted_neighbors(Vertex::Node(i)) {
                let mult = mult as i64;
                match pinned.get(&nbr) {
                    Some(value) => bound += mult * value,
                    None => {
                        let Vertex::Node(k) = nbr else {
                            unreachable!("infinity is pinned")
                        };
                        coeffs[unknowns.iter().position(|&u| u == k).expect("unknown")] -= mult;
                    }
                }
            }
            Inequality {
                vertex: i,
                coeffs,
                bound,
            }
        })
        .collect();
    let targets = unknowns.iter().map(|&i| (n as u64 * delta[i]) as i64).collect();
    Ok(ConstraintSystem {
        kind,
        n,
        face: face.clone(),
        unknowns,
        pinned,
        inequalities,
        targets,
    })
}

/// Exact maximum of `v_vertex` over the rational polytope.
pub fn lp_max(sys: &ConstraintSystem, vertex: usize) -> Result<Rational> {
    let k = sys.position(vertex)?;
    let mut c = vec![Rational::from_integer(0.into()); sys.unknowns.len()];
    c[k] = Rational::from_integer(1.into());
    let a: Vec<Vec<Rational>> = sys
        .inequalities
        .iter()
        .map(|q| q.coeffs.iter().map(|&x| rational::int(x)).collect())
        .collect();
    let b: Vec<Rational> = sys.inequalities.iter().map(|q| rational::int(q.bound)).collect();
    match lp::maximize(&c, &a, &b) {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Unbounded => Err(Error::Unbounded(vertex)),
        LpOutcome::Infeasible => Err(Error::Infeasible),
    }
}

fn initial_box(sys: &ConstraintSystem) -> Result<Vec<Interval>> {
    sys.unknowns
        .iter()
        .map(|&v| {
            let hi = rational::floor_to_i64(&lp_max(sys, v)?).ok_or(Error::Unbounded(v))?;
            Ok(Interval { lo: 0, hi })
        })
        .collect()
}

/// Calls `f` on every integer point, in lexicographic order of the search.
pub fn for_each_integer_point(sys: &ConstraintSystem, mut f: impl FnMut(&[i64])) -> Result<()> {
    let start = initial_box(sys)?;
    enumerate::visit(sys, &start, &mut f);
    Ok(())
}

pub fn integer_enumerate(sys: &ConstraintSystem) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for_each_integer_point(sys, |p| out.push(p.to_vec()))?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Counterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    #[serde(rename = "type")]
    pub kind: String,
    pub n: usize,
    #[serde(rename = "J")]
    pub face: Vec<usize>,
    pub status: Status,
    /// Unknown vertices, in the order used by `witnesses`.
    pub vertices: Vec<usize>,
    /// Violating points, at most [`WITNESS_LIMIT`] of them.
    pub witnesses: Vec<Vec<i64>>,
    pub violations: usize,
    pub integer_points: usize,
    pub integer_max: BTreeMap<usize, i64>,
    pub lp_max: BTreeMap<usize, String>,
    pub targets: BTreeMap<usize, i64>,
}

pub const WITNESS_LIMIT: usize = 32;

impl VerificationReport {
    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }

    pub fn summary_line(&self) -> String {
        let face = Face::new(self.face.iter().copied());
        let status = match self.status {
            Status::Verified => "verified",
            Status::Counterexample => "COUNTEREXAMPLE",
        };
        format!(
            "{} n={} {}: {} ({} integer points)",
            self.kind, self.n, face, status, self.integer_points
        )
    }
}

pub fn verify_bound(kind: DynkinType, n: usize, face: &Face) -> Result<VerificationReport> {
    let sys = build_system(kind, n, face)?;
    let k = sys.unknowns.len();
    let mut lp = BTreeMap::new();
    for &v in &sys.unknowns {
        lp.insert(v, lp_max(&sys, v)?);
    }
    let mut maxima = vec![i64::MIN; k];
    let mut witnesses = Vec::new();
    let mut violations = 0;
    let mut points = 0;
    for_each_integer_point(&sys, |p| {
        points += 1;
        for (m, &x) in maxima.iter_mut().zip(p) {
            *m = (*m).max(x);
        }
        if p.iter().zip(&sys.targets).any(|(x, t)| x > t) {
            violations += 1;
            if witnesses.len() < WITNESS_LIMIT {
                witnesses.push(p.to_vec());
            }
        }
    })?;
    for (pos, &v) in sys.unknowns.iter().enumerate() {
        debug_assert!(
            lp[&v] >= rational::int(maxima[pos]),
            "LP must dominate the integer maximum"
        );
    }
    let status = if violations == 0 {
        Status::Verified
    } else {
        Status::Counterexample
    };
    Ok(VerificationReport {
        kind: kind.to_string(),
        n,
        face: face.iter().collect(),
        status,
        vertices: sys.unknowns.clone(),
        witnesses,
        violations,
        integer_points: points,
        integer_max: sys.unknowns.iter().copied().zip(maxima).collect(),
        lp_max: lp.iter().map(|(&v, q)| (v, rational::to_wire(q))).collect(),
        targets: sys.unknowns.iter().copied().zip(sys.targets.iter().copied()).collect(),
    })
}

/// Reports for the given faces, in the given order.
pub fn verify_faces(kind: DynkinType, n: usize, faces: &[Face]) -> Result<Vec<VerificationReport>> {
    faces.par_iter().map(|f| verify_bound(kind, n, f)).collect()
}

/// Every nonempty `J`, ordered by bitmask.
pub fn verify_all(kind: DynkinType, n: usize) -> Result<Vec<VerificationReport>> {
    let faces: Vec<Face> = (1..1u64 << kind.unframed_count()).map(Face::from_mask).collect();
    verify_faces(kind, n, &faces)
}

pub fn summarize(reports: &[VerificationReport]) -> String {
    let ok = reports.iter().filter(|r| r.is_verified()).count();
    format!("{ok}/{} verified", reports.len())
}
