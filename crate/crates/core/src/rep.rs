//! Representations of the framed McKay quiver over the rationals.
//!
//! A representation assigns `Q^{dims[v]}` to every vertex and a
//! `dims[head] x dims[tail]` matrix to every arrow. It is a module over the
//! preprojective algebra exactly when every moment residual vanishes.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{closure_under, RMatrix, Rational, Subspace};
use crate::quiver::{DimensionVector, FramedMcKayQuiver, QuiverJson, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverRepresentation {
    quiver: FramedMcKayQuiver,
    dims: DimensionVector,
    mats: Vec<RMatrix>,
}

/// Graded subspace produced by [`QuiverRepresentation::submodule_generated`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    pub dims: DimensionVector,
    /// Basis of the subspace at each vertex, in that vertex's coordinates.
    pub basis: Vec<Vec<Vec<Rational>>>,
}

/// Outcome of the local test at a vertex `i`: `f` stacks the arrows leaving
/// `i`, `g` the (signed) arrows entering `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexProbe {
    pub f_injective: bool,
    pub g_surjective: bool,
    pub inequality_holds: bool,
}

impl QuiverRepresentation {
    pub fn new(quiver: FramedMcKayQuiver, dims: DimensionVector, mats: Vec<RMatrix>) -> Result<Self> {
        if dims.len() != quiver.num_vertices() {
            return Err(Error::Shape(format!(
                "dimension vector has {} entries, quiver has {} vertices",
                dims.len(),
                quiver.num_vertices()
            )));
        }
        if mats.len() != quiver.arrows().len() {
            return Err(Error::Shape(format!(
                "{} matrices for {} arrows",
                mats.len(),
                quiver.arrows().len()
            )));
        }
        for (a, m) in mats.iter().enumerate() {
            let arrow = &quiver.arrows()[a];
            let want = (dims[arrow.head], dims[arrow.tail]);
            if m.shape() != want {
                return Err(Error::Shape(format!(
                    "arrow {} has shape {:?}, expected {want:?}",
                    quiver.arrow_id(a),
                    m.shape()
                )));
            }
        }
        Ok(Self { quiver, dims, mats })
    }

    pub fn zero(quiver: FramedMcKayQuiver, dims: DimensionVector) -> Result<Self> {
        let mats = quiver
            .arrows()
            .iter()
            .map(|a| RMatrix::zeros(dims.get(a.head), dims.get(a.tail)))
            .collect();
        Self::new(quiver, dims, mats)
    }

    /// One-dimensional space at `v`, zero elsewhere, all maps zero.
    pub fn vertex_simple(quiver: &FramedMcKayQuiver, v: Vertex) -> Result<Self> {
        if !quiver.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        let mut dims = DimensionVector::zeros(quiver.num_vertices());
        dims.set(v, 1);
        Self::zero(quiver.clone(), dims)
    }

    pub fn quiver(&self) -> &FramedMcKayQuiver {
        &self.quiver
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn mats(&self) -> &[RMatrix] {
        &self.mats
    }

    pub fn mat(&self, arrow: usize) -> &RMatrix {
        &self.mats[arrow]
    }

    /// Residual `sum_{head(a) = v} eps(a) * a * a*` at every vertex, indexed
    /// in vertex order.
    pub fn moment_residual(&self) -> Vec<RMatrix> {
        self.quiver
            .vertices()
            .into_iter()
            .map(|v| self.residual_at(v))
            .collect()
    }

    pub fn residual_at(&self, v: Vertex) -> RMatrix {
        let d = self.dims[v];
        self.quiver.arrows_into(v).fold(RMatrix::zeros(d, d), |acc, a| {
            let eps = Rational::from_integer(self.quiver.arrows()[a].epsilon.into());
            let term = &self.mats[a] * &self.mats[self.quiver.star(a)];
            &acc + &term.scale(&eps)
        })
    }

    pub fn is_preprojective(&self) -> bool {
        self.moment_residual().iter().all(RMatrix::is_zero)
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.dims.len() + 1);
        let mut acc = 0;
        for &d in self.dims.entries() {
            off.push(acc);
            acc += d;
        }
        off.push(acc);
        off
    }

    /// Every arrow as a block operator on the total space `sum_v Q^{dims[v]}`.
    fn total_operators(&self) -> Vec<RMatrix> {
        let off = self.offsets();
        let total = self.dims.total();
        self.quiver
            .arrows()
            .iter()
            .zip(&self.mats)
            .map(|(a, m)| {
                let mut op = RMatrix::zeros(total, total);
                op.set_block(off[a.head.index()], off[a.tail.index()], m);
                op
            })
            .collect()
    }

    /// Smallest arrow-invariant graded subspace containing the seed vectors.
    pub fn submodule_generated(&self, seeds: &[(Vertex, Vec<Rational>)]) -> Result<Submodule> {
        let off = self.offsets();
        let total = self.dims.total();
        let mut lifted = Vec::with_capacity(seeds.len());
        for (v, vec) in seeds {
            if !self.quiver.has_vertex(*v) {
                return Err(Error::UnknownVertex(*v));
            }
            if vec.len() != self.dims[*v] {
                return Err(Error::Shape(format!(
                    "seed at vertex {v} has length {}, space has dimension {}",
                    vec.len(),
                    self.dims[*v]
                )));
            }
            let mut x = vec![Rational::zero(); total];
            x[off[v.index()]..off[v.index() + 1]].clone_from_slice(vec);
            lifted.push(x);
        }
        let space = closure_under(total, &self.total_operators(), &lifted)?;
        Ok(self.split_graded(&space))
    }

    // The closure of homogeneous seeds under homogeneous operators is graded,
    // and the echelon basis of a graded subspace has every vector inside one
    // vertex block.
    fn split_graded(&self, space: &Subspace) -> Submodule {
        let off = self.offsets();
        let nv = self.dims.len();
        let mut basis = vec![Vec::new(); nv];
        for b in space.basis() {
            let first = b.iter().position(|x| !x.is_zero()).expect("basis vectors are nonzero");
            let block = (0..nv).find(|&i| first < off[i + 1]).expect("index inside total space");
            debug_assert!(b
                .iter()
                .enumerate()
                .all(|(k, x)| x.is_zero() || (off[block]..off[block + 1]).contains(&k)));
            basis[block].push(b[off[block]..off[block + 1]].to_vec());
        }
        let dims = DimensionVector::new(basis.iter().map(Vec::len).collect());
        Submodule { dims, basis }
    }

    /// True iff the framing generator generates the whole representation.
    pub fn is_cyclic_at_infinity(&self) -> Result<bool> {
        let d = self.dims[Vertex::Infinity];
        if d != 1 {
            return Err(Error::FramingDimension(d));
        }
        let sub = self.submodule_generated(&[(Vertex::Infinity, vec![Rational::from_integer(1.into())])])?;
        Ok(sub.dims == self.dims)
    }

    /// Block-diagonal sum; bases of `self` come first at every vertex.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.quiver != other.quiver {
            return Err(Error::QuiverMismatch(format!(
                "{} vs {}",
                self.quiver.kind(),
                other.quiver.kind()
            )));
        }
        let dims = &self.dims + &other.dims;
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| RMatrix::block_diag(a, b))
            .collect();
        Self::new(self.quiver.clone(), dims, mats)
    }

    /// `f: V_i -> (+)_{head(a)=i} V_tail(a)` built from the `a*`, and
    /// `g` back again built from `eps(a) a`, so `g f` is the moment residual
    /// at `i`.
    pub fn vertex_stability_probe(&self, v: Vertex) -> Result<VertexProbe> {
        if !self.quiver.has_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        if v == Vertex::Infinity {
            return Err(Error::Payload("the framing vertex has no stability probe".into()));
        }
        let di = self.dims[v];
        let incoming: Vec<usize> = self.quiver.arrows_into(v).collect();
        let sum_dims: usize = incoming.iter().map(|&a| self.dims[self.quiver.arrows()[a].tail]).sum();
        let outs: Vec<&RMatrix> = incoming.iter().map(|&a| &self.mats[self.quiver.star(a)]).collect();
        let f = RMatrix::vstack(&outs, di)?;
        let signed: Vec<RMatrix> = incoming
            .iter()
            .map(|&a| {
                let eps = Rational::from_integer(self.quiver.arrows()[a].epsilon.into());
                self.mats[a].scale(&eps)
            })
            .collect();
        let g = RMatrix::hstack(&signed.iter().collect::<Vec<_>>(), di)?;
        Ok(VertexProbe {
            f_injective: f.rank() == di,
            g_surjective: g.rank() == di,
            inequality_holds: 2 * di <= sum_dims,
        })
    }

    pub fn to_json(&self) -> RepJson {
        RepJson {
            quiver: self.quiver.to_json(),
            dims: self.dims.to_json(),
            mats: (0..self.mats.len())
                .map(|a| (self.quiver.arrow_id(a), self.mats[a].to_wire()))
                .collect(),
        }
    }

    pub fn from_json(json: &RepJson) -> Result<Self> {
        let quiver = FramedMcKayQuiver::from_json(&json.quiver)?;
        let dims = DimensionVector::from_json(&json.dims, quiver.num_vertices())?;
        let mut mats: Vec<Option<RMatrix>> = vec![None; quiver.arrows().len()];
        for (id, rows) in &json.mats {
            let a = quiver.arrow_by_id(id)?;
            let arrow = &quiver.arrows()[a];
            mats[a] = Some(RMatrix::from_wire(rows, dims[arrow.tail])?);
        }
        let mats = mats
            .into_iter()
            .enumerate()
            .map(|(a, m)| m.ok_or_else(|| Error::Payload(format!("missing matrix for arrow {}", quiver.arrow_id(a)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(quiver, dims, mats)
    }
}

/// Wire form `{"quiver":…, "dims":{…}, "mats":{"u>v#k":[["p/q",…],…]}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepJson {
    pub quiver: QuiverJson,
    pub dims: serde_json::Map<String, serde_json::Value>,
    pub mats: BTreeMap<String, Vec<Vec<String>>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational::int;
    use crate::quiver::{build_framed_quiver, DynkinType};

    fn a2() -> FramedMcKayQuiver {
        build_framed_quiver(DynkinType::a(2).unwrap())
    }

    #[test]
    fn zero_rep_has_zero_residuals() {
        let q = a2();
        let rep = QuiverRepresentation::zero(q.clone(), q.dimension_vector(2)).unwrap();
        assert!(rep.is_preprojective());
    }

    #[test]
    fn single_pair_residual_is_identity() {
        let q = a2();
        let dims = DimensionVector::new(vec![0, 2, 2, 0]);
        let mut rep = QuiverRepresentation::zero(q.clone(), dims).unwrap();
        let a = q.arrow_by_id("0>1#0").unwrap();
        assert_eq!(q.arrows()[a].epsilon, 1);
        rep.mats[a] = RMatrix::identity(2);
        rep.mats[q.star(a)] = RMatrix::identity(2);
        assert_eq!(rep.residual_at(Vertex::Node(1)), RMatrix::identity(2));
        assert_eq!(rep.residual_at(Vertex::Node(0)), RMatrix::identity(2).scale(&int(-1)));
    }

    #[test]
    fn shape_validation() {
        let q = a2();
        let dims = DimensionVector::new(vec![1, 1, 1, 1]);
        let mats = vec![RMatrix::zeros(2, 2); q.arrows().len()];
        assert!(QuiverRepresentation::new(q, dims, mats).is_err());
    }

    #[test]
    fn vertex_simples() {
        let q = a2();
        let s0 = QuiverRepresentation::vertex_simple(&q, Vertex::Node(0)).unwrap();
        assert_eq!(s0.dims().entries(), &[0, 1, 0, 0]);
        let sinf = QuiverRepresentation::vertex_simple(&q, Vertex::Infinity).unwrap();
        assert_eq!(sinf.dims().entries(), &[1, 0, 0, 0]);
        let s1 = QuiverRepresentation::vertex_simple(&q, Vertex::Node(1)).unwrap();
        assert_eq!(s1.direct_sum(&s1).unwrap().dims().entries(), &[0, 0, 2, 0]);
        assert!(QuiverRepresentation::vertex_simple(&q, Vertex::Node(7)).is_err());
    }

    #[test]
    fn simple_probe_is_not_injective() {
        let q = a2();
        let s = QuiverRepresentation::vertex_simple(&q, Vertex::Node(1)).unwrap();
        let p = s.vertex_stability_probe(Vertex::Node(1)).unwrap();
        assert!(!p.f_injective);
        assert!(!p.g_surjective);
        assert!(!p.inequality_holds);
    }

    #[test]
    fn zero_rep_probes_vacuously() {
        let q = a2();
        let z = QuiverRepresentation::zero(q.clone(), DimensionVector::zeros(4)).unwrap();
        for v in 0..=2 {
            let p = z.vertex_stability_probe(Vertex::Node(v)).unwrap();
            assert_eq!(
                p,
                VertexProbe {
                    f_injective: true,
                    g_surjective: true,
                    inequality_holds: true
                }
            );
        }
    }

    #[test]
    fn submodule_edge_cases() {
        let q = a2();
        let rep = QuiverRepresentation::zero(q.clone(), q.dimension_vector(1)).unwrap();
        let empty = rep.submodule_generated(&[]).unwrap();
        assert_eq!(empty.dims, DimensionVector::zeros(4));
        let all: Vec<(Vertex, Vec<Rational>)> = q.vertices().into_iter().map(|v| (v, vec![int(1)])).collect();
        assert_eq!(rep.submodule_generated(&all).unwrap().dims, *rep.dims());
        assert!(rep
            .submodule_generated(&[(Vertex::Node(0), vec![int(1), int(2)])])
            .is_err());
    }

    #[test]
    fn trivially_cyclic_when_unframed_spaces_vanish() {
        let q = a2();
        let s = QuiverRepresentation::vertex_simple(&q, Vertex::Infinity).unwrap();
        assert!(s.is_cyclic_at_infinity().unwrap());
        let bad = QuiverRepresentation::zero(q.clone(), DimensionVector::zeros(4)).unwrap();
        assert!(matches!(bad.is_cyclic_at_infinity(), Err(Error::FramingDimension(0))));
    }

    #[test]
    fn direct_sum_requires_same_quiver() {
        let a = QuiverRepresentation::vertex_simple(&a2(), Vertex::Node(0)).unwrap();
        let b = QuiverRepresentation::vertex_simple(&build_framed_quiver(DynkinType::a(3).unwrap()), Vertex::Node(0))
            .unwrap();
        assert!(a.direct_sum(&b).is_err());
    }
}
