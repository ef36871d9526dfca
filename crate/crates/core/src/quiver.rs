//! Framed McKay quivers of ADE type.
//!
//! Vertex numbering is canonical per family. Vertex 0 is the trivial
//! representation and is the only vertex joined to the framing vertex `inf`.
//!
//! * `A_r`: the cycle `0 - 1 - ... - r - 0`; for `r = 1` a double edge.
//! * `D_r`: leaves `0` and `1` on vertex `2`, a chain `2 - ... - (r-2)`, and
//!   leaves `r-1`, `r` on vertex `r-2`.
//! * `E_r`: the arm through `0` runs towards the branch vertex, then the
//!   remaining arms follow in order of decreasing length.
//!
//! Every edge is stored as `(u, v)` with `u` nearer the framing vertex (for
//! the `A` cycle: `u -> v` runs in the direction of increasing index mod
//! `r + 1`). The arrow `u -> v` carries `epsilon = +1`, its reverse `-1`.

use std::fmt;
use std::ops::{Add, Index};
use std::str::FromStr;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{RMatrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::D => 'D',
            Family::E => 'E',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DynkinType {
    family: Family,
    rank: usize,
}

impl DynkinType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
        };
        if ok {
            Ok(Self { family, rank })
        } else {
            Err(Error::InvalidRank {
                family: family.letter(),
                rank,
            })
        }
    }

    pub fn a(rank: usize) -> Result<Self> {
        Self::new(Family::A, rank)
    }

    pub fn d(rank: usize) -> Result<Self> {
        Self::new(Family::D, rank)
    }

    pub fn e(rank: usize) -> Result<Self> {
        Self::new(Family::E, rank)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of vertices of the unframed affine diagram, `r + 1`.
    pub fn unframed_count(&self) -> usize {
        self.rank + 1
    }

    /// Every type in a small catalogue, handy for exhaustive tests.
    pub fn catalogue(max_a: usize, max_d: usize) -> Vec<Self> {
        let mut out: Vec<Self> = (1..=max_a).map(|r| Self::a(r).unwrap()).collect();
        out.extend((4..=max_d).map(|r| Self::d(r).unwrap()));
        out.extend((6..=8).map(|r| Self::e(r).unwrap()));
        out
    }

    /// Edges `(u, v, multiplicity)` of the unframed affine diagram.
    fn unframed_edges(&self) -> Vec<(usize, usize, usize)> {
        let r = self.rank;
        match self.family {
            Family::A if r == 1 => vec![(0, 1, 2)],
            Family::A => {
                let mut e: Vec<_> = (0..r).map(|k| (k, k + 1, 1)).collect();
                e.push((r, 0, 1));
                e
            }
            Family::D => {
                let mut e = vec![(0, 2, 1), (2, 1, 1)];
                e.extend((2..r - 2).map(|k| (k, k + 1, 1)));
                e.push((r - 2, r - 1, 1));
                e.push((r - 2, r, 1));
                e
            }
            Family::E => {
                let (long, branch, arms): (usize, usize, &[&[usize]]) = match r {
                    6 => (2, 2, &[&[3, 4], &[5, 6]]),
                    7 => (3, 3, &[&[4, 5, 6], &[7]]),
                    _ => (5, 5, &[&[6, 7], &[8]]),
                };
                let mut e: Vec<_> = (0..long).map(|k| (k, k + 1, 1)).collect();
                for arm in arms {
                    let mut prev = branch;
                    for &v in arm.iter() {
                        e.push((prev, v, 1));
                        prev = v;
                    }
                }
                e
            }
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for DynkinType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let mut chars = t.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('D') => Family::D,
            Some('E') => Family::E,
            _ => return Err(Error::ParseType(s.to_string())),
        };
        let rank: usize = chars
            .as_str()
            .trim_start_matches('_')
            .parse()
            .map_err(|_| Error::ParseType(s.to_string()))?;
        Self::new(family, rank)
    }
}

/// A vertex of the framed quiver. `Infinity` sorts first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Infinity,
    Node(usize),
}

impl Vertex {
    /// Position in the canonical vertex order `inf, 0, 1, ..., r`.
    pub fn index(self) -> usize {
        match self {
            Vertex::Infinity => 0,
            Vertex::Node(i) => i + 1,
        }
    }

    pub fn from_index(index: usize) -> Self {
        if index == 0 {
            Vertex::Infinity
        } else {
            Vertex::Node(index - 1)
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Infinity => f.write_str("inf"),
            Vertex::Node(i) => write!(f, "{i}"),
        }
    }
}

impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" => Ok(Vertex::Infinity),
            t => t
                .parse()
                .map(Vertex::Node)
                .map_err(|_| Error::Payload(format!("bad vertex {s:?}"))),
        }
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Vertex::Infinity => s.serialize_str("inf"),
            Vertex::Node(i) => s.serialize_u64(*i as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Index(usize),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Index(i) => Ok(Vertex::Node(i)),
            Raw::Name(s) => s.parse().map_err(de::Error::custom),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: Vertex,
    pub v: Vertex,
    pub mult: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub edge: usize,
    /// Which of the `mult` parallel copies of the edge.
    pub copy: usize,
    /// True for the `v -> u` orientation (the starred arrow).
    pub reversed: bool,
    pub tail: Vertex,
    pub head: Vertex,
    pub epsilon: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramedMcKayQuiver {
    kind: DynkinType,
    edges: Vec<Edge>,
    arrows: Vec<Arrow>,
    delta: Vec<u64>,
}

pub fn build_framed_quiver(kind: DynkinType) -> FramedMcKayQuiver {
    let mut edges = vec![Edge {
        u: Vertex::Infinity,
        v: Vertex::Node(0),
        mult: 1,
    }];
    edges.extend(kind.unframed_edges().into_iter().map(|(u, v, mult)| Edge {
        u: Vertex::Node(u),
        v: Vertex::Node(v),
        mult,
    }));
    let mut arrows = Vec::new();
    for (ei, e) in edges.iter().enumerate() {
        for copy in 0..e.mult {
            arrows.push(Arrow {
                edge: ei,
                copy,
                reversed: false,
                tail: e.u,
                head: e.v,
                epsilon: 1,
            });
            arrows.push(Arrow {
                edge: ei,
                copy,
                reversed: true,
                tail: e.v,
                head: e.u,
                epsilon: -1,
            });
        }
    }
    let delta = solve_null_root(kind, &edges).expect("affine ADE diagrams have a positive null root");
    FramedMcKayQuiver {
        kind,
        edges,
        arrows,
        delta,
    }
}

/// Normalized positive integer generator of the kernel of `2I - adjacency`
/// on the unframed diagram.
fn solve_null_root(kind: DynkinType, edges: &[Edge]) -> Result<Vec<u64>> {
    let n = kind.unframed_count();
    let mut cartan = RMatrix::identity(n).scale(&Rational::from_integer(2.into()));
    for e in edges {
        if let (Vertex::Node(u), Vertex::Node(v)) = (e.u, e.v) {
            let m = Rational::from_integer((e.mult as i64).into());
            cartan[(u, v)] -= &m;
            cartan[(v, u)] -= &m;
        }
    }
    let kernel = cartan.kernel_basis();
    let fail = || Error::NullRoot(kind.to_string());
    if kernel.len() != 1 || kernel[0][0].is_zero() {
        return Err(fail());
    }
    let scale = kernel[0][0].clone();
    kernel[0]
        .iter()
        .map(|x| {
            let y = x / &scale;
            if !y.denom().is_one() || !y.is_positive() {
                return Err(fail());
            }
            y.to_integer().to_u64().ok_or_else(fail)
        })
        .collect()
}

impl FramedMcKayQuiver {
    pub fn kind(&self) -> DynkinType {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.kind.rank
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn delta(&self) -> &[u64] {
        &self.delta
    }

    pub fn num_vertices(&self) -> usize {
        self.kind.rank + 2
    }

    /// `inf, 0, 1, ..., r`.
    pub fn vertices(&self) -> Vec<Vertex> {
        (0..self.num_vertices()).map(Vertex::from_index).collect()
    }

    pub fn has_vertex(&self, v: Vertex) -> bool {
        v.index() < self.num_vertices()
    }

    /// Index of the opposite arrow `a*`.
    pub fn star(&self, arrow: usize) -> usize {
        arrow ^ 1
    }

    pub fn arrow_id(&self, arrow: usize) -> String {
        let a = &self.arrows[arrow];
        let e = &self.edges[a.edge];
        let star = if a.reversed { "*" } else { "" };
        format!("{}>{}#{}{}", e.u, e.v, a.copy, star)
    }

    pub fn arrow_by_id(&self, id: &str) -> Result<usize> {
        (0..self.arrows.len())
            .find(|&a| self.arrow_id(a) == id)
            .ok_or_else(|| Error::UnknownArrow(id.to_string()))
    }

    pub fn arrows_into(&self, v: Vertex) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].head == v)
    }

    pub fn arrows_out_of(&self, v: Vertex) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].tail == v)
    }

    /// Neighbours of `v` counted with edge multiplicity (the framing vertex
    /// included).
    pub fn weighted_neighbors(&self, v: Vertex) -> Vec<(Vertex, usize)> {
        self.edges
            .iter()
            .filter_map(|e| {
                if e.u == v {
                    Some((e.v, e.mult))
                } else if e.v == v {
                    Some((e.u, e.mult))
                } else {
                    None
                }
            })
            .collect()
    }

    /// For type `A_r`: the edges `e_k` of the affine cycle, `e_k` joining `k`
    /// to `k + 1 mod (r + 1)`, as `(x, y)` arrow pairs where `x: k -> k+1`
    /// and `y = x*`. For `A_1` the two copies of the double edge play the
    /// roles of `e_0` and `e_1`.
    pub fn type_a_cycle(&self) -> Option<Vec<(usize, usize)>> {
        if self.kind.family != Family::A {
            return None;
        }
        let r = self.kind.rank;
        let out = (0..=r)
            .map(|k| {
                let (tail, head) = (Vertex::Node(k), Vertex::Node((k + 1) % (r + 1)));
                let x = (0..self.arrows.len())
                    .find(|&a| {
                        let ar = &self.arrows[a];
                        ar.tail == tail && ar.head == head && (r > 1 || ar.copy == k)
                    })
                    .expect("cycle arrow present");
                (x, self.star(x))
            })
            .collect();
        Some(out)
    }

    /// The same quiver with every `epsilon` negated.
    pub fn with_flipped_epsilon(&self) -> Self {
        let mut q = self.clone();
        for a in q.arrows.iter_mut() {
            a.epsilon = -a.epsilon;
        }
        q
    }

    /// `v_inf = 1`, `v_i = n * delta_i`.
    pub fn dimension_vector(&self, n: usize) -> DimensionVector {
        let mut entries = vec![1];
        entries.extend(self.delta.iter().map(|&d| n * d as usize));
        DimensionVector::new(entries)
    }

    /// Checks the structural invariants; used after deserialization and in
    /// tests.
    pub fn check_invariants(&self) -> Result<()> {
        let bad = |m: String| Err(Error::QuiverMismatch(m));
        let framing: Vec<&Edge> = self
            .edges
            .iter()
            .filter(|e| e.u == Vertex::Infinity || e.v == Vertex::Infinity)
            .collect();
        if framing.len() != 1 || framing[0].mult != 1 || framing[0].v != Vertex::Node(0) {
            return bad("framing vertex must be joined to 0 by a single edge".into());
        }
        for a in 0..self.arrows.len() {
            let (x, y) = (&self.arrows[a], &self.arrows[self.star(a)]);
            if x.epsilon == y.epsilon || x.tail != y.head || x.head != y.tail {
                return bad(format!("arrow {} is not paired with its opposite", self.arrow_id(a)));
            }
        }
        if self.delta.first() != Some(&1) {
            return bad("delta_0 must be 1".into());
        }
        for i in 0..self.kind.unframed_count() {
            let sum: u64 = self
                .weighted_neighbors(Vertex::Node(i))
                .into_iter()
                .filter_map(|(w, m)| match w {
                    Vertex::Node(j) => Some(m as u64 * self.delta[j]),
                    Vertex::Infinity => None,
                })
                .sum();
            if 2 * self.delta[i] != sum {
                return bad(format!("null-root identity fails at vertex {i}"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> QuiverJson {
        QuiverJson {
            family: self.kind.family,
            rank: self.kind.rank,
            edges: self.edges.iter().map(|e| (e.u, e.v, e.mult)).collect(),
            delta: self.delta.clone(),
        }
    }

    pub fn from_json(json: &QuiverJson) -> Result<Self> {
        let q = build_framed_quiver(DynkinType::new(json.family, json.rank)?);
        if q.to_json() != *json {
            return Err(Error::QuiverMismatch(format!(
                "payload for {} does not match the canonical framed quiver",
                q.kind
            )));
        }
        Ok(q)
    }
}

/// Wire form: `{"type":"D","rank":4,"edges":[["inf",0,1],...],"delta":[...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson {
    #[serde(rename = "type")]
    pub family: Family,
    pub rank: usize,
    pub edges: Vec<(Vertex, Vertex, usize)>,
    pub delta: Vec<u64>,
}

/// Nonnegative integer per vertex, indexed in the order `inf, 0, ..., r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimensionVector {
    entries: Vec<usize>,
}

impl DimensionVector {
    pub fn new(entries: Vec<usize>) -> Self {
        Self { entries }
    }

    pub fn zeros(num_vertices: usize) -> Self {
        Self::new(vec![0; num_vertices])
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, v: Vertex) -> usize {
        self.entries.get(v.index()).copied().unwrap_or(0)
    }

    pub fn set(&mut self, v: Vertex, value: usize) {
        self.entries[v.index()] = value;
    }

    pub fn total(&self) -> usize {
        self.entries.iter().sum()
    }

    pub fn to_json(&self) -> serde_json::Map<String, serde_json::Value> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, &d)| (Vertex::from_index(i).to_string(), d.into()))
            .collect()
    }

    pub fn from_json(map: &serde_json::Map<String, serde_json::Value>, num_vertices: usize) -> Result<Self> {
        let mut dv = Self::zeros(num_vertices);
        for (k, val) in map {
            let v: Vertex = k.parse()?;
            if v.index() >= num_vertices {
                return Err(Error::UnknownVertex(v));
            }
            let d = val
                .as_u64()
                .ok_or_else(|| Error::Payload(format!("dimension at {k} is not a nonnegative integer")))?;
            dv.set(v, d as usize);
        }
        Ok(dv)
    }
}

impl Index<Vertex> for DimensionVector {
    type Output = usize;

    fn index(&self, v: Vertex) -> &usize {
        &self.entries[v.index()]
    }
}

impl Add for &DimensionVector {
    type Output = DimensionVector;

    fn add(self, rhs: &DimensionVector) -> DimensionVector {
        let n = self.len().max(rhs.len());
        DimensionVector::new(
            (0..n)
                .map(|i| self.entries.get(i).unwrap_or(&0) + rhs.entries.get(i).unwrap_or(&0))
                .collect(),
        )
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rest: Vec<String> = self.entries.iter().skip(1).map(ToString::to_string).collect();
        write!(f, "({}; {})", self.entries.first().unwrap_or(&0), rest.join(","))
    }
}

pub fn dimension_vector_v(kind: DynkinType, n: usize) -> DimensionVector {
    build_framed_quiver(kind).dimension_vector(n)
}

/// Vertex labels used in the hand analysis of `E_8` (chain
/// `1-3-4-5-6-7-8-0-inf` with `2` on `4`) mapped to canonical indices.
pub const E8_APPENDIX_TO_CANONICAL: [(usize, usize); 9] =
    [(0, 0), (1, 7), (2, 8), (3, 6), (4, 5), (5, 4), (6, 3), (7, 2), (8, 1)];

pub fn e8_from_appendix_label(label: usize) -> Option<usize> {
    E8_APPENDIX_TO_CANONICAL
        .iter()
        .find(|(a, _)| *a == label)
        .map(|&(_, c)| c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_double_edge() {
        let q = build_framed_quiver(DynkinType::a(1).unwrap());
        assert_eq!(q.delta(), &[1, 1]);
        assert_eq!(
            q.edges()[1],
            Edge {
                u: Vertex::Node(0),
                v: Vertex::Node(1),
                mult: 2
            }
        );
        // framing pair + two pairs for the double edge
        assert_eq!(q.arrows().len(), 6);
        assert_eq!(q.arrow_id(4), "0>1#1");
        assert_eq!(q.arrow_id(5), "0>1#1*");
    }

    #[test]
    fn d4_star() {
        let q = build_framed_quiver(DynkinType::d(4).unwrap());
        assert_eq!(q.delta(), &[1, 1, 2, 1, 1]);
        assert_eq!(q.weighted_neighbors(Vertex::Node(2)).len(), 4);
    }

    #[test]
    fn invalid_ranks() {
        assert!(DynkinType::a(0).is_err());
        assert!(DynkinType::d(3).is_err());
        assert!(DynkinType::e(5).is_err());
        assert!(DynkinType::e(9).is_err());
        assert!("B3".parse::<DynkinType>().is_err());
        assert_eq!("e8".parse::<DynkinType>().unwrap(), DynkinType::e(8).unwrap());
    }

    #[test]
    fn dimension_vectors() {
        let v = dimension_vector_v(DynkinType::a(2).unwrap(), 3);
        assert_eq!(v.entries(), &[1, 3, 3, 3]);
        let v = dimension_vector_v(DynkinType::d(4).unwrap(), 1);
        assert_eq!(v.entries(), &[1, 1, 1, 2, 1, 1]);
        let v = dimension_vector_v(DynkinType::a(1).unwrap(), 5);
        assert_eq!(v.entries(), &[1, 5, 5]);
    }

    #[test]
    fn arrow_ids_roundtrip() {
        let q = build_framed_quiver(DynkinType::e(6).unwrap());
        for a in 0..q.arrows().len() {
            assert_eq!(q.arrow_by_id(&q.arrow_id(a)).unwrap(), a);
        }
        assert_eq!(q.arrow_id(0), "inf>0#0");
        assert!(q.arrow_by_id("9>9#0").is_err());
    }

    #[test]
    fn e8_relabelling_preserves_edges() {
        let appendix_edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 0), (2, 4)];
        let q = build_framed_quiver(DynkinType::e(8).unwrap());
        for (a, b) in appendix_edges {
            let (ca, cb) = (e8_from_appendix_label(a).unwrap(), e8_from_appendix_label(b).unwrap());
            assert!(q.weighted_neighbors(Vertex::Node(ca)).contains(&(Vertex::Node(cb), 1)));
        }
        // the appendix's branch vertex 4 carries delta 6
        assert_eq!(q.delta()[e8_from_appendix_label(4).unwrap()], 6);
    }

    #[test]
    fn json_shape() {
        let q = build_framed_quiver(DynkinType::d(4).unwrap());
        let s = serde_json::to_string(&q.to_json()).unwrap();
        assert!(
            s.starts_with(r#"{"type":"D","rank":4,"edges":[["inf",0,1],[0,2,1]"#),
            "{s}"
        );
        assert!(s.ends_with(r#""delta":[1,1,2,1,1]}"#), "{s}");
        let back: QuiverJson = serde_json::from_str(&s).unwrap();
        assert_eq!(FramedMcKayQuiver::from_json(&back).unwrap(), q);
    }

    #[test]
    fn tampered_json_is_rejected() {
        let mut j = build_framed_quiver(DynkinType::a(3).unwrap()).to_json();
        j.delta[1] = 2;
        assert!(FramedMcKayQuiver::from_json(&j).is_err());
    }
}
