//! Torus-fixed points for `Gamma = mu_(r+1)` acting on `C^2` with weights
//! `(+1, -1)`.
//!
//! A monomial `x^i y^j` is a cell `(i, j)` of weight `(i - j) mod (r+1)`.
//! Monomial ideals of `C[x,y]` are staircases; monomial ideals of the
//! invariant ring are order ideals of the monoid `M_r = {i = j mod r+1}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corner::CornerModule;
use crate::error::{Error, Result};
use crate::linalg::{RMatrix, Rational};
use crate::quiver::{build_framed_quiver, DynkinType, FramedMcKayQuiver, Vertex};
use crate::rep::QuiverRepresentation;

pub type Cell = (usize, usize);

/// Finite downward-closed set of cells.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "CellsJson", into = "CellsJson")]
pub struct Staircase {
    cells: BTreeSet<Cell>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CellsJson {
    cells: Vec<Cell>,
}

impl TryFrom<CellsJson> for Staircase {
    type Error = Error;

    fn try_from(json: CellsJson) -> Result<Self> {
        Staircase::new(json.cells)
    }
}

impl From<Staircase> for CellsJson {
    fn from(s: Staircase) -> Self {
        CellsJson {
            cells: s.cells.into_iter().collect(),
        }
    }
}

impl Staircase {
    pub fn new(cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let cells: BTreeSet<Cell> = cells.into_iter().collect();
        for &(i, j) in &cells {
            let below = [(i > 0).then(|| (i - 1, j)), (j > 0).then(|| (i, j - 1))];
            if let Some(missing) = below.into_iter().flatten().find(|c| !cells.contains(c)) {
                return Err(Error::NotStaircase(format!(
                    "({i},{j}) present but {missing:?} missing"
                )));
            }
        }
        Ok(Self { cells })
    }

    pub fn empty() -> Self {
        Self { cells: BTreeSet::new() }
    }

    /// `rows[j]` cells along the x-axis at height `j`; must be nonincreasing.
    pub fn from_rows(rows: &[usize]) -> Result<Self> {
        Self::new(
            rows.iter()
                .enumerate()
                .flat_map(|(j, &len)| (0..len).map(move |i| (i, j))),
        )
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.contains(&c)
    }

    /// Cells of weight `k`, in sorted order. This is the basis used at
    /// vertex `k`.
    pub fn cells_of_weight(&self, r: usize, k: usize) -> Vec<Cell> {
        self.cells.iter().copied().filter(|&c| weight(c, r) == k).collect()
    }
}

impl fmt::Display for Staircase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

pub fn weight((i, j): Cell, r: usize) -> usize {
    let m = r + 1;
    (i % m + m - j % m) % m
}

/// All staircases with `n` cells, via partitions, sorted.
pub fn enumerate_staircases(n: usize) -> Vec<Staircase> {
    let mut out = Vec::new();
    let mut parts = Vec::new();
    partitions(n, n, &mut parts, &mut out);
    out.sort();
    out
}

fn partitions(rest: usize, max: usize, parts: &mut Vec<usize>, out: &mut Vec<Staircase>) {
    if rest == 0 {
        out.push(Staircase::from_rows(parts).expect("partition"));
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        parts.push(p);
        partitions(rest - p, p, parts, out);
        parts.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightProfile {
    counts: Vec<usize>,
}

impl WeightProfile {
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `Some(n)` when every weight class has exactly `n` cells.
    pub fn regular_n(&self) -> Option<usize> {
        let first = self.counts[0];
        self.counts.iter().all(|&c| c == first).then_some(first)
    }
}

pub fn weight_profile(s: &Staircase, r: usize) -> WeightProfile {
    let mut counts = vec![0; r + 1];
    for &c in &s.cells {
        counts[weight(c, r)] += 1;
    }
    WeightProfile { counts }
}

pub fn rep_from_ideal(s: &Staircase, r: usize, n: usize) -> Result<QuiverRepresentation> {
    rep_from_ideal_on(s, &build_framed_quiver(DynkinType::a(r)?), n)
}

/// The representation `C[x,y]/I` of the type-A quiver `q`, graded by weight.
///
/// `x` along cycle edge `e` is multiplication by `x`; `y` along `e` is
/// multiplication by `y` scaled by `eps(x_e)`, which makes every moment
/// residual vanish whatever the sign convention of `q` is.
pub fn rep_from_ideal_on(s: &Staircase, q: &FramedMcKayQuiver, n: usize) -> Result<QuiverRepresentation> {
    let kind = q.kind();
    let cycle = q
        .type_a_cycle()
        .ok_or_else(|| Error::TypeANotSupported(kind.to_string()))?;
    let r = kind.rank();
    let profile = weight_profile(s, r);
    if profile.regular_n() != Some(n) {
        return Err(Error::NotRegularType(profile.counts));
    }
    let bases: Vec<Vec<Cell>> = (0..=r).map(|k| s.cells_of_weight(r, k)).collect();
    let index: Vec<BTreeMap<Cell, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(p, &c)| (c, p)).collect())
        .collect();
    let shift = |from: usize, to: usize, step: Cell, scale: Rational| {
        let mut m = RMatrix::zeros(n, n);
        for (col, &(i, j)) in bases[from].iter().enumerate() {
            if let Some(&row) = index[to].get(&(i + step.0, j + step.1)) {
                m[(row, col)] = scale.clone();
            }
        }
        m
    };

    let dims = q.dimension_vector(n);
    let mut mats: Vec<RMatrix> = q
        .arrows()
        .iter()
        .map(|a| RMatrix::zeros(dims[a.head], dims[a.tail]))
        .collect();
    for (k, &(x, y)) in cycle.iter().enumerate() {
        let (from, to) = (k, (k + 1) % (r + 1));
        mats[x] = shift(from, to, (1, 0), Rational::one());
        let sign = Rational::from_integer(q.arrows()[x].epsilon.into());
        mats[y] = shift(to, from, (0, 1), sign);
    }
    if n > 0 {
        let b = q.arrows_out_of(Vertex::Infinity).next().expect("framing arrow");
        let origin = index[0][&(0, 0)];
        mats[b][(origin, 0)] = Rational::one();
    }
    QuiverRepresentation::new(q.clone(), dims, mats)
}

/// Regular-type staircases with `n(r+1)` cells: the torus-fixed points of
/// `nGamma-Hilb(C^2)`.
pub fn enumerate_regular_fixed_points(r: usize, n: usize) -> Vec<Staircase> {
    enumerate_staircases(n * (r + 1))
        .into_par_iter()
        .filter(|s| weight_profile(s, r).regular_n() == Some(n))
        .collect()
}

/// Finite order ideal of `M_r` under the componentwise order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonoidStaircase {
    r: usize,
    cells: BTreeSet<Cell>,
}

impl MonoidStaircase {
    pub fn generators(r: usize) -> [Cell; 3] {
        [(r + 1, 0), (0, r + 1), (1, 1)]
    }

    pub fn new(r: usize, cells: impl IntoIterator<Item = Cell>) -> Result<Self> {
        let cells: BTreeSet<Cell> = cells.into_iter().collect();
        for &c in &cells {
            if weight(c, r) != 0 {
                return Err(Error::NotStaircase(format!("{c:?} is not invariant for r={r}")));
            }
            // closure under single generator steps implies full closure,
            // since M_r is generated by them
            for (gi, gj) in Self::generators(r) {
                if c.0 >= gi && c.1 >= gj && !cells.contains(&(c.0 - gi, c.1 - gj)) {
                    return Err(Error::NotStaircase(format!(
                        "{c:?} present but {:?} missing",
                        (c.0 - gi, c.1 - gj)
                    )));
                }
            }
        }
        Ok(Self { r, cells })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn can_add(&self, c: Cell) -> bool {
        !self.cells.contains(&c)
            && Self::generators(self.r)
                .iter()
                .all(|&(gi, gj)| c.0 < gi || c.1 < gj || self.cells.contains(&(c.0 - gi, c.1 - gj)))
    }

    fn extensions(&self) -> Vec<MonoidStaircase> {
        let mut candidates: BTreeSet<Cell> = BTreeSet::new();
        if self.cells.is_empty() {
            candidates.insert((0, 0));
        }
        for &(i, j) in &self.cells {
            for (gi, gj) in Self::generators(self.r) {
                candidates.insert((i + gi, j + gj));
            }
        }
        candidates
            .into_iter()
            .filter(|&c| self.can_add(c))
            .map(|c| {
                let mut cells = self.cells.clone();
                cells.insert(c);
                MonoidStaircase { r: self.r, cells }
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "r": self.r, "cells": self.cells.iter().collect::<Vec<_>>() })
    }
}

impl fmt::Display for MonoidStaircase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// All `n`-cell order ideals of `M_r`, by breadth-first extension.
pub fn enumerate_monoid_staircases(r: usize, n: usize) -> Vec<MonoidStaircase> {
    let mut level = vec![MonoidStaircase {
        r,
        cells: BTreeSet::new(),
    }];
    for _ in 0..n {
        let next: BTreeSet<MonoidStaircase> = level
            .par_iter()
            .flat_map_iter(MonoidStaircase::extensions)
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        level = next.into_iter().collect();
    }
    level
}

pub fn intersect_with_invariants(s: &Staircase, r: usize) -> MonoidStaircase {
    MonoidStaircase::new(r, s.cells.iter().copied().filter(|&c| weight(c, r) == 0))
        .expect("a staircase meets M_r in an order ideal")
}

/// `chi_0, ..., chi_{n_max}`.
pub fn euler_characteristic_series(r: usize, n_max: usize) -> Vec<usize> {
    let mut out = vec![1];
    let mut level = vec![MonoidStaircase {
        r,
        cells: BTreeSet::new(),
    }];
    for _ in 0..n_max {
        let next: BTreeSet<MonoidStaircase> = level
            .par_iter()
            .flat_map_iter(MonoidStaircase::extensions)
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        out.push(next.len());
        level = next.into_iter().collect();
    }
    out
}

pub fn euler_csv(series: &[usize]) -> String {
    let mut out = String::from("n,chi\n");
    for (n, chi) in series.iter().enumerate() {
        out.push_str(&format!("{n},{chi}\n"));
    }
    out
}

/// `C[x,y]^Gamma / I` as a corner module: multiplication by
/// `x^(r+1), y^(r+1), xy` on the cells, generator at the origin.
pub fn corner_from_staircase(ms: &MonoidStaircase) -> CornerModule {
    let cells: Vec<Cell> = ms.cells.iter().copied().collect();
    let n = cells.len();
    let index: BTreeMap<Cell, usize> = cells.iter().enumerate().map(|(p, &c)| (c, p)).collect();
    let a = MonoidStaircase::generators(ms.r).map(|(gi, gj)| {
        let mut m = RMatrix::zeros(n, n);
        for (col, &(i, j)) in cells.iter().enumerate() {
            if let Some(&row) = index.get(&(i + gi, j + gj)) {
                m[(row, col)] = Rational::one();
            }
        }
        m
    });
    let mut w = vec![Rational::zero(); n];
    if let Some(&origin) = index.get(&(0, 0)) {
        w[origin] = Rational::one();
    }
    let w = if n == 0 {
        RMatrix::zeros(0, 1)
    } else {
        RMatrix::column_vector(w)
    };
    CornerModule::new(w, RMatrix::zeros(1, n), a).expect("square operators")
}
