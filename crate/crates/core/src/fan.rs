//! Stability parameters, the chamber `C+` and the faces of its closure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rational::{self, Rational};
use crate::quiver::{build_framed_quiver, DimensionVector, DynkinType, Vertex};

/// Largest rank for which the face poset is materialized.
pub const MAX_POSET_RANK: usize = 20;

/// A subset `J` of the unframed vertices `{0, ..., r}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Face(BTreeSet<usize>);

impl Face {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        Self(members.into_iter().collect())
    }

    pub fn all(kind: DynkinType) -> Self {
        Self::new(0..kind.unframed_count())
    }

    pub fn from_mask(mask: u64) -> Self {
        Self::new((0..64).filter(|i| mask >> i & 1 == 1))
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &i| m | 1 << i)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn validate(&self, kind: DynkinType) -> Result<()> {
        match self.0.iter().find(|&&i| i > kind.rank()) {
            Some(&index) => Err(Error::FaceOutOfRange {
                index,
                rank: kind.rank(),
            }),
            None => Ok(()),
        }
    }

    /// Parses `"0,2"` (empty string for the empty set).
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('{').trim_end_matches('}');
        if t.trim().is_empty() {
            return Ok(Self::default());
        }
        t.split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Payload(format!("bad index {p:?} in J")))
            })
            .collect::<Result<BTreeSet<_>>>()
            .map(Self)
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "J={{{}}}", items.join(","))
    }
}

/// Rational weight per vertex; vertices without an entry weigh zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityParameter {
    values: BTreeMap<Vertex, Rational>,
}

impl StabilityParameter {
    pub fn new(values: BTreeMap<Vertex, Rational>) -> Self {
        Self { values }
    }

    pub fn get(&self, v: Vertex) -> Rational {
        self.values.get(&v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.values.keys().copied()
    }

    pub fn values(&self) -> &BTreeMap<Vertex, Rational> {
        &self.values
    }

    pub fn evaluate(&self, dims: &DimensionVector) -> Rational {
        self.values
            .iter()
            .map(|(v, t)| t * Rational::from_integer(dims.get(*v).into()))
            .sum()
    }

    pub fn to_wire(&self) -> BTreeMap<String, String> {
        self.values
            .iter()
            .map(|(v, t)| (v.to_string(), rational::to_wire(t)))
            .collect()
    }
}

/// `theta_J`: `-sum_{j in J} n delta_j` at infinity, 1 on `J`, 0 elsewhere.
pub fn theta_j(kind: DynkinType, n: usize, face: &Face) -> Result<StabilityParameter> {
    face.validate(kind)?;
    let q = build_framed_quiver(kind);
    let weight: u64 = face.iter().map(|j| n as u64 * q.delta()[j]).sum();
    let mut values = BTreeMap::new();
    values.insert(Vertex::Infinity, -Rational::from_integer(weight.into()));
    for i in 0..kind.unframed_count() {
        let t = if face.contains(i) { 1 } else { 0 };
        values.insert(Vertex::Node(i), rational::int(t));
    }
    Ok(StabilityParameter::new(values))
}

/// Restriction of `theta_J` to the cornered vertex set `{inf} ∪ J`.
pub fn eta_j(kind: DynkinType, n: usize, face: &Face) -> Result<StabilityParameter> {
    if face.is_empty() {
        return Err(Error::EmptyFace);
    }
    let theta = theta_j(kind, n, face)?;
    let values = theta
        .values
        .into_iter()
        .filter(|(v, _)| match v {
            Vertex::Infinity => true,
            Vertex::Node(i) => face.contains(*i),
        })
        .collect();
    Ok(StabilityParameter::new(values))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Strictly positive on every unframed vertex.
    Chamber,
    /// In the closure, positive exactly on the members of the face.
    Face(Face),
    Outside,
}

impl Classification {
    /// The face `sigma_J` containing the parameter; `C+` itself is the face
    /// of the full vertex set.
    pub fn face(&self, kind: DynkinType) -> Option<Face> {
        match self {
            Classification::Chamber => Some(Face::all(kind)),
            Classification::Face(f) => Some(f.clone()),
            Classification::Outside => None,
        }
    }
}

pub fn classify(kind: DynkinType, theta: &StabilityParameter) -> Classification {
    let vals: Vec<Rational> = (0..kind.unframed_count()).map(|i| theta.get(Vertex::Node(i))).collect();
    if vals.iter().any(Signed::is_negative) {
        Classification::Outside
    } else if vals.iter().all(Signed::is_positive) {
        Classification::Chamber
    } else {
        Classification::Face(Face::new(
            vals.iter().enumerate().filter(|(_, t)| t.is_positive()).map(|(i, _)| i),
        ))
    }
}

/// Face poset of the closure of `C+`; Hasse edges run from `J` to
/// `J \ {j}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacePoset {
    #[serde(rename = "type")]
    pub kind: String,
    pub nodes: Vec<PosetNode>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetNode {
    pub face: Face,
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

pub const TOP_LABEL: &str = "nΓ-Hilb(C²)";
pub const BOTTOM_LABEL: &str = "Sym^n(C²/Γ)";

pub fn face_poset(kind: DynkinType) -> Result<FacePoset> {
    let m = kind.unframed_count();
    if kind.rank() > MAX_POSET_RANK {
        return Err(Error::FaceOutOfRange {
            index: kind.rank(),
            rank: MAX_POSET_RANK,
        });
    }
    let full: u64 = (1 << m) - 1;
    // descending size, then lexicographic on the sorted members
    let mut masks: Vec<u64> = (0..=full).collect();
    masks.sort_by(|a, b| {
        b.count_ones()
            .cmp(&a.count_ones())
            .then_with(|| Face::from_mask(*a).cmp(&Face::from_mask(*b)))
    });
    let position: BTreeMap<u64, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let nodes = masks
        .iter()
        .map(|&mask| PosetNode {
            face: Face::from_mask(mask),
            rank: mask.count_ones() as usize,
            label: if mask == full {
                Some(TOP_LABEL.to_string())
            } else if mask == 0 {
                Some(BOTTOM_LABEL.to_string())
            } else {
                None
            },
        })
        .collect();
    let mut edges = Vec::new();
    for &mask in &masks {
        for j in 0..m {
            if mask >> j & 1 == 1 {
                edges.push((position[&mask], position[&(mask & !(1 << j))]));
            }
        }
    }
    edges.sort_unstable();
    Ok(FacePoset {
        kind: kind.to_string(),
        nodes,
        edges,
    })
}

impl FacePoset {
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph face_poset_{} {{\n  rankdir=TB;\n", self.kind);
        for n in &self.nodes {
            let label = match &n.label {
                Some(l) => format!("{}\\n{}", n.face, l),
                None => n.face.to_string(),
            };
            out.push_str(&format!("  \"{}\" [rank={}, label=\"{}\"];\n", n.face, n.rank, label));
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n",
                self.nodes[a].face, self.nodes[b].face
            ));
        }
        out.push_str("}\n");
        out
    }

    /// One line per Hasse edge, `J={..} -> J={..}`.
    pub fn hasse_lines(&self) -> Vec<String> {
        self.edges
            .iter()
            .map(|&(a, b)| format!("{} -> {}", self.nodes[a].face, self.nodes[b].face))
            .collect()
    }
}

/// For `n = 1`: is the contraction along the relation `larger ⊃ smaller` an
/// isomorphism? True exactly when the two subsets differ by `{0}`.
pub fn n1_collapse_predicate(larger: &Face, smaller: &Face) -> Result<bool> {
    if !(smaller.0.is_subset(&larger.0) && smaller != larger) {
        return Err(Error::NotPosetRelation(format!(
            "{smaller} is not a proper subset of {larger}"
        )));
    }
    let diff: Vec<usize> = larger.0.symmetric_difference(&smaller.0).copied().collect();
    Ok(diff == [0])
}
