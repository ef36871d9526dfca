//! Hypersurface equations `f(z1, z2, z3) = 0` of the Kleinian singularities.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::linalg::{RMatrix, Rational};
use crate::quiver::{DynkinType, Family};

/// Sparse polynomial with integer coefficients in `N` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<const N: usize> {
    terms: BTreeMap<[u32; N], BigInt>,
}

pub type Poly2 = Poly<2>;
pub type Poly3 = Poly<3>;

impl<const N: usize> Poly<N> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, [0; N])
    }

    pub fn monomial(coeff: i64, exps: [u32; N]) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, BigInt::from(coeff));
        p
    }

    pub fn from_terms(terms: &[(i64, [u32; N])]) -> Self {
        let mut p = Self::zero();
        for &(c, e) in terms {
            p.add_term(e, BigInt::from(c));
        }
        p
    }

    fn add_term(&mut self, exps: [u32; N], coeff: BigInt) {
        let entry = self.terms.entry(exps).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; N], &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = [0; N];
                for k in 0..N {
                    e[k] = ea[k] + eb[k];
                }
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, point: &[Rational; N]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            let mut t = Rational::from_integer(c.clone());
            for k in 0..N {
                t *= num_traits::pow(point[k].clone(), e[k] as usize);
            }
            acc + t
        })
    }

    /// Substitutes polynomials for the variables.
    pub fn substitute<const M: usize>(&self, values: &[Poly<M>; N]) -> Poly<M> {
        self.terms.iter().fold(Poly::<M>::zero(), |acc, (e, c)| {
            let mut t = Poly::<M>::zero();
            t.add_term([0; M], c.clone());
            for k in 0..N {
                t = t.mul(&values[k].pow(e[k]));
            }
            acc.add(&t)
        })
    }

    /// Evaluates at pairwise commuting square matrices; the order of factors
    /// inside a monomial is then irrelevant.
    pub fn eval_commuting(&self, mats: &[RMatrix; N]) -> RMatrix {
        let n = mats[0].rows();
        self.terms.iter().fold(RMatrix::zeros(n, n), |acc, (e, c)| {
            let mut t = RMatrix::identity(n).scale(&Rational::from_integer(c.clone()));
            for k in 0..N {
                if e[k] > 0 {
                    t = &t * &mats[k].pow(e[k]);
                }
            }
            &acc + &t
        })
    }
}

impl<const N: usize> fmt::Display for Poly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: &[&str] = if N == 2 { &["x", "y"] } else { &["z1", "z2", "z3"] };
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // highest total degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mut factors: Vec<String> = Vec::new();
            for k in 0..N {
                match e[k] {
                    0 => {}
                    1 => factors.push(names[k].to_string()),
                    p => factors.push(format!("{}^{p}", names[k])),
                }
            }
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                f.write_str(&factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypersurfaceData {
    pub f: Poly3,
    /// Invariant generators `(z1, z2, z3)` as polynomials in `x, y`; type A only.
    pub generators: Option<[Poly2; 3]>,
}

/// `A_r`: `z1 z2 - z3^(r+1)` with generators `x^(r+1), y^(r+1), xy`.
/// `D` and `E` use Arnold's normal forms (no generators are attached).
pub fn hypersurface(kind: DynkinType) -> HypersurfaceData {
    let r = kind.rank() as u32;
    match kind.family() {
        Family::A => HypersurfaceData {
            f: Poly3::from_terms(&[(1, [1, 1, 0]), (-1, [0, 0, r + 1])]),
            generators: Some([
                Poly2::monomial(1, [r + 1, 0]),
                Poly2::monomial(1, [0, r + 1]),
                Poly2::monomial(1, [1, 1]),
            ]),
        },
        Family::D => HypersurfaceData {
            f: Poly3::from_terms(&[(1, [2, 1, 0]), (1, [0, r - 1, 0]), (1, [0, 0, 2])]),
            generators: None,
        },
        Family::E => {
            let f = match r {
                6 => Poly3::from_terms(&[(1, [2, 0, 0]), (1, [0, 3, 0]), (1, [0, 0, 4])]),
                7 => Poly3::from_terms(&[(1, [2, 0, 0]), (1, [0, 3, 0]), (1, [0, 1, 3])]),
                _ => Poly3::from_terms(&[(1, [2, 0, 0]), (1, [0, 3, 0]), (1, [0, 0, 5])]),
            };
            HypersurfaceData { f, generators: None }
        }
    }
}

impl HypersurfaceData {
    /// `f(g1, g2, g3)` for type A, `None` otherwise.
    pub fn substituted(&self) -> Option<Poly2> {
        self.generators.as_ref().map(|g| self.f.substitute(g))
    }
}
