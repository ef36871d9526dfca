use num_traits::{One, Zero};

use super::matrix::RMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// A linear subspace of `Q^ambient`, stored as its reduced row echelon basis.
///
/// The representation is canonical, so two subspaces are equal iff their
/// `Subspace` values compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    /// Rows sorted by pivot column, pivot entry 1, zero above and below.
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let mut s = Self::zero(ambient);
        for i in 0..ambient {
            let mut e = vec![Rational::zero(); ambient];
            e[i] = Rational::one();
            s.insert(e);
        }
        s
    }

    pub fn spanned_by(ambient: usize, vectors: impl IntoIterator<Item = Vec<Rational>>) -> Result<Self> {
        let mut s = Self::zero(ambient);
        for v in vectors {
            if v.len() != ambient {
                return Err(Error::Shape(format!(
                    "vector of length {} in ambient dimension {ambient}",
                    v.len()
                )));
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    fn reduce(&self, mut v: Vec<Rational>) -> Vec<Rational> {
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for (x, b) in v.iter_mut().zip(row) {
                if !b.is_zero() {
                    *x -= &c * b;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span. Returns true if the dimension grew.
    pub fn insert(&mut self, v: Vec<Rational>) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for row in self.basis.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &c * y;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.basis.insert(at, r);
        true
    }

    pub fn is_invariant_under(&self, op: &RMatrix) -> bool {
        self.basis.iter().all(|b| self.contains(&op.mul_vec(b)))
    }
}

/// Smallest subspace containing `seed` and mapped into itself by every
/// operator.
pub fn closure_under(ambient: usize, operators: &[RMatrix], seed: &[Vec<Rational>]) -> Result<Subspace> {
    for op in operators {
        if op.shape() != (ambient, ambient) {
            return Err(Error::Shape(format!(
                "operator of shape {:?} on ambient dimension {ambient}",
                op.shape()
            )));
        }
    }
    let mut space = Subspace::zero(ambient);
    let mut frontier = Vec::new();
    for v in seed {
        if v.len() != ambient {
            return Err(Error::Shape(format!(
                "seed of length {} in ambient dimension {ambient}",
                v.len()
            )));
        }
        if space.insert(v.clone()) {
            frontier.push(v.clone());
        }
    }
    while let Some(v) = frontier.pop() {
        for op in operators {
            let image = op.mul_vec(&v);
            if space.insert(image.clone()) {
                frontier.push(image);
            }
        }
    }
    Ok(space)
}
