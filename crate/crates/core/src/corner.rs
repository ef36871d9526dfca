//! The cornered algebra for `J = {0}`.
//!
//! Modules over the cornered preprojective algebra on which `b*` acts by
//! zero are modules over `CQ'/K`: a vector `w` at vertex 0 (image of the
//! arrow `inf -> 0`) and three commuting endomorphisms `A1, A2, A3`
//! satisfying `f(A1, A2, A3) = 0`. A point of `Hilb^n(C^2/Gamma)` is such a
//! module of rank `n` generated by `w`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::rational::{self, Rational};
use crate::linalg::{closure_under, RMatrix};
use crate::poly::{hypersurface, Poly3};
use crate::quiver::{DynkinType, Family, Vertex};
use crate::rep::QuiverRepresentation;

/// The quiver `Q'`: vertices `inf, 0`, one arrow `alpha: inf -> 0` and three
/// loops `alpha_1, alpha_2, alpha_3` at `0`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QPrime;

impl QPrime {
    pub const VERTICES: [Vertex; 2] = [Vertex::Infinity, Vertex::Node(0)];
    pub const ARROWS: [(&'static str, Vertex, Vertex); 4] = [
        ("alpha", Vertex::Infinity, Vertex::Node(0)),
        ("alpha_1", Vertex::Node(0), Vertex::Node(0)),
        ("alpha_2", Vertex::Node(0), Vertex::Node(0)),
        ("alpha_3", Vertex::Node(0), Vertex::Node(0)),
    ];
}

/// The ideal `K = (f(a1, a2, a3), [a1, a2], [a1, a3], [a2, a3])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerIdealK {
    pub f: Poly3,
}

impl CornerIdealK {
    pub const COMMUTING_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

    pub fn for_type(kind: DynkinType) -> Self {
        Self {
            f: hypersurface(kind).f,
        }
    }

    pub fn relations(&self) -> Vec<String> {
        let f = self
            .f
            .to_string()
            .replace("z1", "alpha_1")
            .replace("z2", "alpha_2")
            .replace("z3", "alpha_3");
        let mut out = vec![f];
        out.extend(
            Self::COMMUTING_PAIRS
                .iter()
                .map(|(i, j)| format!("alpha_{}*alpha_{} - alpha_{}*alpha_{}", i + 1, j + 1, j + 1, i + 1)),
        );
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerModule {
    n: usize,
    w: RMatrix,
    wstar: RMatrix,
    a: [RMatrix; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    /// `[A1, A2]`, `[A1, A3]`, `[A2, A3]`.
    pub commutators: [RMatrix; 3],
    pub f_residual: RMatrix,
}

impl RelationReport {
    pub fn is_valid(&self) -> bool {
        self.commutators.iter().all(RMatrix::is_zero) && self.f_residual.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WstarReport {
    pub vanishes: bool,
    /// `(column, value)` for every nonzero entry of `w*`.
    pub nonzero: Vec<(usize, String)>,
}

impl CornerModule {
    pub fn new(w: RMatrix, wstar: RMatrix, a: [RMatrix; 3]) -> Result<Self> {
        let n = w.rows();
        if w.cols() != 1 {
            return Err(Error::Shape(format!("w must be {n}x1, got {:?}", w.shape())));
        }
        if wstar.shape() != (1, n) {
            return Err(Error::Shape(format!("w* must be 1x{n}, got {:?}", wstar.shape())));
        }
        if let Some(bad) = a.iter().find(|m| m.shape() != (n, n)) {
            return Err(Error::Shape(format!("A_i must be {n}x{n}, got {:?}", bad.shape())));
        }
        Ok(Self { n, w, wstar, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn w(&self) -> &RMatrix {
        &self.w
    }

    pub fn wstar(&self) -> &RMatrix {
        &self.wstar
    }

    pub fn operators(&self) -> &[RMatrix; 3] {
        &self.a
    }

    /// Rank-one module `(a, b, c)` with generator `1`.
    pub fn scalar(a: Rational, b: Rational, c: Rational) -> Self {
        let one = Rational::one();
        Self::new(
            RMatrix::scalar(one),
            RMatrix::zeros(1, 1),
            [RMatrix::scalar(a), RMatrix::scalar(b), RMatrix::scalar(c)],
        )
        .expect("1x1 shapes")
    }

    fn commutators(&self) -> [RMatrix; 3] {
        CornerIdealK::COMMUTING_PAIRS.map(|(i, j)| self.a[i].commutator(&self.a[j]).expect("square"))
    }

    pub fn check_relations(&self, kind: DynkinType) -> Result<RelationReport> {
        let commutators = self.commutators();
        // f is only meaningful on commuting operators; evaluate it anyway so
        // the report is complete
        let f_residual = if self.n == 0 {
            RMatrix::zeros(0, 0)
        } else {
            CornerIdealK::for_type(kind).f.eval_commuting(&self.a)
        };
        Ok(RelationReport {
            commutators,
            f_residual,
        })
    }

    /// Cyclic with generator `w`: the `A_i`-closure of `w` is everything.
    pub fn is_eta_stable(&self) -> Result<bool> {
        if let Some(k) = self.commutators().iter().position(|c| !c.is_zero()) {
            let (i, j) = CornerIdealK::COMMUTING_PAIRS[k];
            return Err(Error::RelationsViolated(format!(
                "A{} and A{} do not commute",
                i + 1,
                j + 1
            )));
        }
        let span = closure_under(self.n, &self.a, &[self.w.column(0)])?;
        Ok(span.dim() == self.n)
    }

    pub fn wstar_vanishes(&self) -> WstarReport {
        let nonzero: Vec<(usize, String)> = self
            .wstar
            .nonzero_entries()
            .into_iter()
            .map(|(_, j, q)| (j, rational::to_wire(&q)))
            .collect();
        WstarReport {
            vanishes: nonzero.is_empty(),
            nonzero,
        }
    }

    /// Change of basis by `p`: `A -> p A p^-1`, `w -> p w`, `w* -> w* p^-1`.
    pub fn conjugate(&self, p: &RMatrix) -> Result<Self> {
        let inv = p
            .inverse()
            .ok_or_else(|| Error::Shape("basis change is not invertible".into()))?;
        let a = self.a.clone().map(|m| &(p * &m) * &inv);
        Self::new(p.try_mul(&self.w)?, self.wstar.try_mul(&inv)?, a)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let w = RMatrix::vstack(&[&self.w, &other.w], 1).expect("column vectors");
        let wstar = RMatrix::hstack(&[&self.wstar, &other.wstar], 1).expect("row vectors");
        let a = [0, 1, 2].map(|i| RMatrix::block_diag(&self.a[i], &other.a[i]));
        Self::new(w, wstar, a).expect("block shapes")
    }

    /// Joint spectrum of the commuting triple with multiplicity, sorted. Every
    /// characteristic polynomial met on the way must split over Q.
    pub fn hilbert_chow(&self) -> Result<Vec<[Rational; 3]>> {
        if let Some(k) = self.commutators().iter().position(|c| !c.is_zero()) {
            let (i, j) = CornerIdealK::COMMUTING_PAIRS[k];
            return Err(Error::RelationsViolated(format!(
                "A{} and A{} do not commute",
                i + 1,
                j + 1
            )));
        }
        let parts = joint_spectrum(&self.a).map_err(|e| match e {
            Error::NonSplitSpectrum { .. } => Error::NonSplitSpectrum {
                char_polys: self
                    .a
                    .iter()
                    .map(|m| char_poly(m).iter().map(rational::to_wire).collect())
                    .collect(),
            },
            other => other,
        })?;
        let mut points = Vec::with_capacity(self.n);
        for (values, mult) in parts {
            let p: [Rational; 3] = values.try_into().expect("three eigenvalues");
            points.extend(std::iter::repeat_n(p, mult));
        }
        points.sort();
        Ok(points)
    }

    pub fn to_json(&self) -> CornerJson {
        CornerJson {
            n: self.n,
            w: self.w.column(0).iter().map(rational::to_wire).collect(),
            wstar: self.wstar.row(0).iter().map(rational::to_wire).collect(),
            a: self.a.iter().map(RMatrix::to_wire).collect(),
        }
    }

    pub fn from_json(json: &CornerJson) -> Result<Self> {
        let n = json.n;
        let parse = |v: &[String]| v.iter().map(|s| rational::from_wire(s)).collect::<Result<Vec<_>>>();
        let w = parse(&json.w)?;
        let wstar = parse(&json.wstar)?;
        if w.len() != n || wstar.len() != n {
            return Err(Error::Shape(format!("w and w* must have length {n}")));
        }
        if json.a.len() != 3 {
            return Err(Error::Shape(format!("expected 3 operators, got {}", json.a.len())));
        }
        let a: Vec<RMatrix> = json
            .a
            .iter()
            .map(|m| {
                if m.len() != n {
                    return Err(Error::Shape(format!("operators must be {n}x{n}")));
                }
                RMatrix::from_wire(m, n)
            })
            .collect::<Result<_>>()?;
        let a: [RMatrix; 3] = a.try_into().expect("length checked");
        Self::new(RMatrix::column_vector(w), RMatrix::row_vector(wstar), a)
    }
}

/// Wire form `{"n":…, "w":[…], "wstar":[…], "A":[[…],[…],[…]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerJson {
    pub n: usize,
    pub w: Vec<String>,
    pub wstar: Vec<String>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Vec<String>>>,
}

/// Restriction of a type-A representation of dimension vector
/// `(1; n, ..., n)` to the corner `{inf, 0}`.
///
/// The three operators are the cycles at 0 lifting `x^(r+1)`, `y^(r+1)` and
/// `xy`. With `c_e = eps(x_e)` the rescaled arrows `c_e y_e` commute with the
/// `x_e` modulo the preprojective relations, so the cycles are taken in those
/// rescaled arrows.
pub fn j_star_corner(rep: &QuiverRepresentation) -> Result<CornerModule> {
    let q = rep.quiver();
    if q.kind().family() != Family::A {
        return Err(Error::TypeANotSupported(q.kind().to_string()));
    }
    let dims = rep.dims();
    if dims[Vertex::Infinity] != 1 {
        return Err(Error::FramingDimension(dims[Vertex::Infinity]));
    }
    let n = dims[Vertex::Node(0)];
    if dims.entries()[1..].iter().any(|&d| d != n) {
        return Err(Error::NotRegularType(dims.entries()[1..].to_vec()));
    }
    let cycle = q.type_a_cycle().expect("type A");
    let sign = |x: usize| Rational::from_integer(q.arrows()[x].epsilon.into());
    let xs: Vec<&RMatrix> = cycle.iter().map(|&(x, _)| rep.mat(x)).collect();
    let ys: Vec<RMatrix> = cycle.iter().map(|&(x, y)| rep.mat(y).scale(&sign(x))).collect();

    // x-cycle 0 -> 1 -> ... -> r -> 0, so e_0 acts first
    let a1 = xs.iter().fold(RMatrix::identity(n), |acc, x| *x * &acc);
    // y-cycle 0 -> r -> ... -> 1 -> 0, so e_r acts first
    let a2 = ys.iter().rev().fold(RMatrix::identity(n), |acc, y| y * &acc);
    let last = cycle.len() - 1;
    let a3 = xs[last] * &ys[last];

    let framing = q.arrows_out_of(Vertex::Infinity).next().expect("framing arrow");
    let w = rep.mat(framing).clone();
    let wstar = rep.mat(q.star(framing)).clone();
    CornerModule::new(w, wstar, [a1, a2, a3])
}

// ---------------------------------------------------------------------------
// joint spectra over Q

fn joint_spectrum(ops: &[RMatrix]) -> Result<Vec<(Vec<Rational>, usize)>> {
    let dim = ops.first().map_or(0, RMatrix::rows);
    if dim == 0 {
        return Ok(Vec::new());
    }
    let (head, rest) = ops.split_first().expect("nonempty");
    let roots = rational_roots(&char_poly(head))?;
    if roots.iter().map(|(_, m)| m).sum::<usize>() != dim {
        return Err(Error::NonSplitSpectrum { char_polys: Vec::new() });
    }
    let mut out = Vec::new();
    for (lambda, mult) in roots {
        let shifted = head - &RMatrix::identity(dim).scale(&lambda);
        let kernel = shifted.pow(mult as u32).kernel_basis();
        debug_assert_eq!(kernel.len(), mult);
        let basis = RMatrix::hstack(
            &kernel
                .iter()
                .map(|v| RMatrix::column_vector(v.clone()))
                .collect::<Vec<_>>()
                .iter()
                .collect::<Vec<_>>(),
            dim,
        )?;
        let restricted: Vec<RMatrix> = rest.iter().map(|op| restrict(op, &basis)).collect();
        if restricted.is_empty() {
            out.push((vec![lambda], mult));
            continue;
        }
        for (mut values, m) in joint_spectrum(&restricted)? {
            values.insert(0, lambda.clone());
            out.push((values, m));
        }
    }
    Ok(out)
}

/// Matrix of `op` on the invariant subspace spanned by the columns of
/// `basis`: the unique `M` with `op * basis = basis * M`.
fn restrict(op: &RMatrix, basis: &RMatrix) -> RMatrix {
    let bt = basis.transpose();
    let gram_inv = (&bt * basis).inverse().expect("basis columns are independent");
    &(&gram_inv * &bt) * &(op * basis)
}

/// Coefficients (constant term first) of `det(tI - m)`, by Faddeev-LeVerrier.
pub fn char_poly(m: &RMatrix) -> Vec<Rational> {
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut acc = RMatrix::zeros(n, n);
    for k in 1..=n {
        acc = &(m * &acc) + &RMatrix::identity(n).scale(&coeffs[n - k + 1]);
        let am = m * &acc;
        let trace: Rational = (0..n).map(|i| am[(i, i)].clone()).sum();
        coeffs[n - k] = -trace / Rational::from_integer(BigInt::from(k));
    }
    coeffs
}

const ROOT_SEARCH_LIMIT: u64 = 1 << 40;

/// Rational roots with multiplicity of a polynomial given constant term
/// first.
pub fn rational_roots(coeffs: &[Rational]) -> Result<Vec<(Rational, usize)>> {
    let mut poly: Vec<Rational> = coeffs.to_vec();
    while poly.len() > 1 && poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    let mut out = Vec::new();
    let zeros = poly.iter().take_while(|c| c.is_zero()).count().min(poly.len() - 1);
    if zeros > 0 {
        out.push((Rational::zero(), zeros));
        poly.drain(..zeros);
    }
    if poly.len() <= 1 {
        return Ok(out);
    }
    let ints = rational::to_integer_row(&poly);
    let lead = ints.last().expect("nonconstant").abs();
    let constant = ints[0].abs();
    let (Some(lead), Some(constant)) = (lead.to_u64(), constant.to_u64()) else {
        return Err(Error::RootSearchLimit);
    };
    if lead > ROOT_SEARCH_LIMIT || constant > ROOT_SEARCH_LIMIT {
        return Err(Error::RootSearchLimit);
    }
    let mut candidates = Vec::new();
    for p in divisors(constant) {
        for q in divisors(lead) {
            if p.gcd(&q) == 1 {
                for s in [1i64, -1] {
                    candidates.push(Rational::new(BigInt::from(s * p as i64), BigInt::from(q)));
                }
            }
        }
    }
    candidates.sort();
    for c in candidates {
        let mut mult = 0;
        while poly.len() > 1 {
            let (quotient, remainder) = deflate(&poly, &c);
            if !remainder.is_zero() {
                break;
            }
            poly = quotient;
            mult += 1;
        }
        if mult > 0 {
            out.push((c, mult));
        }
    }
    out.sort();
    Ok(out)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Synthetic division by `(t - c)`.
fn deflate(poly: &[Rational], c: &Rational) -> (Vec<Rational>, Rational) {
    let deg = poly.len() - 1;
    let mut quotient = vec![Rational::zero(); deg];
    let mut carry = Rational::zero();
    for i in (0..=deg).rev() {
        let value = &poly[i] + &carry * c;
        if i == 0 {
            return (quotient, value);
        }
        quotient[i - 1] = value.clone();
        carry = value;
    }
    unreachable!()
}
