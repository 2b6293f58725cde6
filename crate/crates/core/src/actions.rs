//! Weight data for circle and 2-torus biquotient actions on `SU(2)×SU(2)`.
//!
//! A circle action is described by four exponents `(a, b, c, d)`:
//!
//! ```text
//! z * (A, B) = (diag(z^a, z̄^a) A diag(z^c, z̄^c)⁻¹, diag(z^b, z̄^b) B diag(z^d, z̄^d)⁻¹)
//! ```
//!
//! A 2-torus action is described linearly on `S³×S³ ⊂ ℂ⁴` by a 2×4 weight
//! matrix: entry `(i, j)` is the exponent of torus coordinate `i` (`z` or `w`)
//! on complex coordinate `j`, ordered `(p₁, q₁, p₂, q₂)`.
//!
//! All weights are stored reduced (content divided out) with the raw input
//! kept alongside for reporting.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted absolute value of a single exponent.
///
/// Keeps every intermediate product used by the library (determinants of
/// exponent columns, products of normalized exponents) inside `i64`/`i128`.
pub const WEIGHT_LIMIT: i64 = 1 << 20;

/// Nonnegative gcd of a slice; `0` for an all-zero slice.
pub fn content(values: &[i64]) -> i64 {
    values.iter().fold(0i64, |g, &v| g.gcd(&v))
}

fn check_limit(values: &[i64]) -> Result<()> {
    match values.iter().find(|v| v.abs() > WEIGHT_LIMIT) {
        Some(v) => Err(Error::invalid(format!(
            "exponent {v} exceeds the supported bound {WEIGHT_LIMIT}"
        ))),
        None => Ok(()),
    }
}

/// Content division, shared by both weight types.
pub trait Reduce: Sized {
    /// Divide out content. Reducing an already reduced value is the identity.
    fn reduce(&self) -> Self;
}

// ----------------------------------------------------------------------------
// Circle actions

/// Exponents `(a, b, c, d)` of a circle biquotient action on `SU(2)×SU(2)`.
///
/// Always reduced: `gcd(a, b, c, d) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "CircleRepr", into = "CircleRepr")]
pub struct CircleWeights {
    raw: [i64; 4],
    reduced: [i64; 4],
}

#[derive(Serialize, Deserialize)]
struct CircleRepr {
    raw: [i64; 4],
    reduced: [i64; 4],
}

impl TryFrom<CircleRepr> for CircleWeights {
    type Error = Error;
    fn try_from(r: CircleRepr) -> Result<Self> {
        let w = CircleWeights::new(r.raw)?;
        if w.reduced != r.reduced {
            return Err(Error::invalid("reduced circle weights do not match raw input"));
        }
        Ok(w)
    }
}

impl From<CircleWeights> for CircleRepr {
    fn from(w: CircleWeights) -> Self {
        CircleRepr { raw: w.raw, reduced: w.reduced }
    }
}

impl CircleWeights {
    pub fn new(raw: [i64; 4]) -> Result<Self> {
        check_limit(&raw)?;
        let g = content(&raw);
        if g == 0 {
            return Err(Error::invalid("circle weights (0,0,0,0) define no action"));
        }
        Ok(CircleWeights { raw, reduced: raw.map(|x| x / g) })
    }

    pub fn from_tuple(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new([a, b, c, d])
    }

    pub fn a(&self) -> i64 {
        self.reduced[0]
    }
    pub fn b(&self) -> i64 {
        self.reduced[1]
    }
    pub fn c(&self) -> i64 {
        self.reduced[2]
    }
    pub fn d(&self) -> i64 {
        self.reduced[3]
    }

    /// Reduced `(a, b, c, d)`.
    pub fn tuple(&self) -> [i64; 4] {
        self.reduced
    }

    /// The input as given, before content division.
    pub fn raw(&self) -> [i64; 4] {
        self.raw
    }

    pub fn is_reduced_input(&self) -> bool {
        self.raw == self.reduced
    }

    pub fn apply(&self, mv: CircleMove) -> Self {
        let [a, b, c, d] = self.reduced;
        let t = match mv {
            CircleMove::ConjugateLeft(Factor::First) => [-a, b, c, d],
            CircleMove::ConjugateLeft(Factor::Second) => [a, -b, c, d],
            CircleMove::ConjugateRight(Factor::First) => [a, b, -c, d],
            CircleMove::ConjugateRight(Factor::Second) => [a, b, c, -d],
            CircleMove::SwapFactors => [b, a, d, c],
            CircleMove::InvertCircle => [-a, -b, -c, -d],
        };
        CircleWeights { raw: t, reduced: t }
    }

    /// Representative of the orbit under [`CircleMove`]s: entries made
    /// nonnegative, then the lexicographically smaller of the tuple and its
    /// factor swap.
    pub fn canonical(&self) -> Self {
        let m = self.reduced.map(i64::abs);
        let swapped = [m[1], m[0], m[3], m[2]];
        let t = m.min(swapped);
        CircleWeights { raw: t, reduced: t }
    }
}

impl Reduce for CircleWeights {
    fn reduce(&self) -> Self {
        CircleWeights { raw: self.raw, reduced: self.reduced }
    }
}

impl fmt::Display for CircleWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.reduced;
        write!(f, "({a},{b},{c},{d})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    First,
    Second,
}

/// Quotient-preserving changes of a circle action: Weyl conjugation of the
/// left or right homomorphism in one factor, the factor swap automorphism of
/// `SU(2)×SU(2)`, and the inversion automorphism of the circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CircleMove {
    ConjugateLeft(Factor),
    ConjugateRight(Factor),
    SwapFactors,
    InvertCircle,
}

impl CircleMove {
    pub const ALL: [CircleMove; 6] = [
        CircleMove::ConjugateLeft(Factor::First),
        CircleMove::ConjugateLeft(Factor::Second),
        CircleMove::ConjugateRight(Factor::First),
        CircleMove::ConjugateRight(Factor::Second),
        CircleMove::SwapFactors,
        CircleMove::InvertCircle,
    ];
}

// ----------------------------------------------------------------------------
// Torus actions

/// A torus coordinate of `T² = {(z, w)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TorusCoord {
    Z,
    W,
}

impl TorusCoord {
    pub fn index(self) -> usize {
        match self {
            TorusCoord::Z => 0,
            TorusCoord::W => 1,
        }
    }
}

/// A complex coordinate of `S³×S³ ⊂ ℂ²×ℂ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SphereCoord {
    P1,
    Q1,
    P2,
    Q2,
}

impl SphereCoord {
    pub const ALL: [SphereCoord; 4] = [SphereCoord::P1, SphereCoord::Q1, SphereCoord::P2, SphereCoord::Q2];

    pub fn index(self) -> usize {
        match self {
            SphereCoord::P1 => 0,
            SphereCoord::Q1 => 1,
            SphereCoord::P2 => 2,
            SphereCoord::Q2 => 3,
        }
    }
}

/// A 2×2 integer matrix of determinant ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct Unimodular([[i64; 2]; 2]);

impl Unimodular {
    pub fn new(m: [[i64; 2]; 2]) -> Result<Self> {
        let det = (m[0][0] as i128) * (m[1][1] as i128) - (m[0][1] as i128) * (m[1][0] as i128);
        if det.abs() != 1 {
            return Err(Error::invalid(format!(
                "reparametrization {m:?} has determinant {det}, expected ±1"
            )));
        }
        Ok(Unimodular(m))
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        self.0
    }

    pub fn det(&self) -> i64 {
        let m = self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn inverse(&self) -> Unimodular {
        let [[a, b], [c, d]] = self.0;
        let det = self.det();
        Unimodular([[d * det, -b * det], [-c * det, a * det]])
    }
}

impl TryFrom<[[i64; 2]; 2]> for Unimodular {
    type Error = Error;
    fn try_from(m: [[i64; 2]; 2]) -> Result<Self> {
        Unimodular::new(m)
    }
}

impl From<Unimodular> for [[i64; 2]; 2] {
    fn from(u: Unimodular) -> Self {
        u.0
    }
}

/// Modifications of a torus action that keep it effectively free (or not)
/// and keep the quotient up to diffeomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryMove {
    /// Replace a torus coordinate by its complex conjugate (negates a row).
    ConjugateTorus(TorusCoord),
    /// Replace a sphere coordinate by its complex conjugate (negates a column).
    ConjugateSphere(SphereCoord),
    /// Interchange `z` and `w` (swaps rows).
    SwapTorus,
    /// Interchange the two `S³` factors (swaps column pairs).
    SwapSphereFactors,
    /// Automorphism of `T²`: left-multiply the weight matrix by `T`.
    Reparametrize(Unimodular),
}

/// The 2×4 weight matrix of a linear `T²` action on `S³×S³`.
///
/// Each nonzero row is stored with content 1. A zero row (or two parallel
/// rows) is allowed but makes the action [`degenerate`](Self::is_degenerate).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TorusRepr", into = "TorusRepr")]
pub struct TorusWeights {
    raw: [[i64; 4]; 2],
    rows: [[i64; 4]; 2],
}

#[derive(Serialize, Deserialize)]
struct TorusRepr {
    raw: [[i64; 4]; 2],
    reduced: [[i64; 4]; 2],
}

impl TryFrom<TorusRepr> for TorusWeights {
    type Error = Error;
    fn try_from(r: TorusRepr) -> Result<Self> {
        let w = TorusWeights::new(r.raw)?;
        if w.rows != r.reduced {
            return Err(Error::invalid("reduced torus weights do not match raw input"));
        }
        Ok(w)
    }
}

impl From<TorusWeights> for TorusRepr {
    fn from(w: TorusWeights) -> Self {
        TorusRepr { raw: w.raw, reduced: w.rows }
    }
}

impl TorusWeights {
    pub fn new(raw: [[i64; 4]; 2]) -> Result<Self> {
        check_limit(raw.as_flattened())?;
        if raw.as_flattened().iter().all(|&x| x == 0) {
            return Err(Error::invalid("torus weight matrix is identically zero"));
        }
        let rows = raw.map(|row| match content(&row) {
            0 => row,
            g => row.map(|x| x / g),
        });
        Ok(TorusWeights { raw, rows })
    }

    pub fn rows(&self) -> [[i64; 4]; 2] {
        self.rows
    }

    pub fn raw(&self) -> [[i64; 4]; 2] {
        self.raw
    }

    pub fn is_reduced_input(&self) -> bool {
        self.raw == self.rows
    }

    /// `(z-exponent, w-exponent)` on a complex coordinate.
    pub fn column(&self, j: usize) -> (i64, i64) {
        (self.rows[0][j], self.rows[1][j])
    }

    /// The 2×2 minor on columns `i`, `j`.
    pub fn minor(&self, i: usize, j: usize) -> i64 {
        let (a, b) = self.column(i);
        let (e, f) = self.column(j);
        a * f - b * e
    }

    /// Rows are rationally dependent (rank below 2).
    pub fn is_degenerate(&self) -> bool {
        (0..4).all(|i| (i + 1..4).all(|j| self.minor(i, j) == 0))
    }

    pub fn apply(&self, mv: SymmetryMove) -> Result<Self> {
        let mut m = self.rows;
        match mv {
            SymmetryMove::ConjugateTorus(i) => {
                let r = &mut m[i.index()];
                *r = r.map(|x| -x);
            }
            SymmetryMove::ConjugateSphere(j) => {
                for row in &mut m {
                    row[j.index()] = -row[j.index()];
                }
            }
            SymmetryMove::SwapTorus => m.swap(0, 1),
            SymmetryMove::SwapSphereFactors => {
                for row in &mut m {
                    *row = [row[2], row[3], row[0], row[1]];
                }
            }
            SymmetryMove::Reparametrize(t) => {
                let t = t.matrix();
                let mut out = [[0i64; 4]; 2];
                for (i, out_row) in out.iter_mut().enumerate() {
                    for (j, entry) in out_row.iter_mut().enumerate() {
                        *entry = t[i][0]
                            .checked_mul(m[0][j])
                            .and_then(|x| t[i][1].checked_mul(m[1][j]).and_then(|y| x.checked_add(y)))
                            .ok_or(Error::Overflow("unimodular reparametrization"))?;
                    }
                }
                m = out;
            }
        }
        TorusWeights::new(m)
    }
}

impl Reduce for TorusWeights {
    fn reduce(&self) -> Self {
        *self
    }
}

impl fmt::Display for TorusWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_row = |r: &[i64; 4]| r.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{}/{}", fmt_row(&self.rows[0]), fmt_row(&self.rows[1]))
    }
}

pub fn apply_symmetry(mv: SymmetryMove, weights: &TorusWeights) -> Result<TorusWeights> {
    weights.apply(mv)
}

// ----------------------------------------------------------------------------
// Torsion elements and coordinate points

/// Which complex coordinate of one `S³` factor is nonzero at a coordinate point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Slot {
    /// `(1, 0)`
    P,
    /// `(0, 1)`
    Q,
}

/// One of the four points `((1,0)|(0,1), (1,0)|(0,1))` of `S³×S³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoordinatePoint(pub Slot, pub Slot);

impl CoordinatePoint {
    pub const ALL: [CoordinatePoint; 4] = [
        CoordinatePoint(Slot::P, Slot::P),
        CoordinatePoint(Slot::P, Slot::Q),
        CoordinatePoint(Slot::Q, Slot::P),
        CoordinatePoint(Slot::Q, Slot::Q),
    ];

    /// Column indices of the two nonzero coordinates.
    pub fn active_columns(self) -> [usize; 2] {
        let first = match self.0 {
            Slot::P => 0,
            Slot::Q => 1,
        };
        let second = match self.1 {
            Slot::P => 2,
            Slot::Q => 3,
        };
        [first, second]
    }

    pub fn swapped(self) -> Self {
        CoordinatePoint(self.1, self.0)
    }
}

impl fmt::Display for CoordinatePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |slot: Slot| match slot {
            Slot::P => "(1,0)",
            Slot::Q => "(0,1)",
        };
        write!(f, "({},{})", s(self.0), s(self.1))
    }
}

/// A torsion element `(e^{2πi j/n}, e^{2πi k/n})` of `T²`, kept with
/// `gcd(j, k, n) = 1` and `0 ≤ j, k < n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorusElement {
    pub order: u64,
    pub exponents: [i64; 2],
}

impl TorusElement {
    pub fn new(order: u64, exponents: [i64; 2]) -> Self {
        assert!(order > 0, "torsion order must be positive");
        let n = order as i64;
        let e = exponents.map(|x| x.mod_floor(&n));
        let g = content(&[e[0], e[1], n]);
        TorusElement { order: (n / g) as u64, exponents: e.map(|x| x / g) }
    }

    pub fn identity() -> Self {
        TorusElement { order: 1, exponents: [0, 0] }
    }

    /// The element `(e^{2πi x}, e^{2πi y})` for rational `x`, `y`.
    pub fn from_fractions(x: Ratio<i64>, y: Ratio<i64>) -> Self {
        let n = x.denom().lcm(y.denom());
        let j = x.numer() * (n / x.denom());
        let k = y.numer() * (n / y.denom());
        TorusElement::new(n as u64, [j, k])
    }

    pub fn fractions(&self) -> [Ratio<i64>; 2] {
        let n = self.order as i64;
        self.exponents.map(|e| Ratio::new(e, n))
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    /// Residue mod `order` of the exponent by which this element scales a
    /// coordinate with weights `(u, v)`.
    pub fn residue_on(&self, (u, v): (i64, i64)) -> i64 {
        let n = self.order as i128;
        let r = (self.exponents[0] as i128 * u as i128 + self.exponents[1] as i128 * v as i128).rem_euclid(n);
        r as i64
    }

    pub fn acts_trivially_on(&self, column: (i64, i64)) -> bool {
        self.residue_on(column) == 0
    }

    /// Right multiplication of the exponent row vector by an integer matrix.
    pub fn times(&self, m: [[i64; 2]; 2]) -> Self {
        let [j, k] = self.exponents;
        TorusElement::new(self.order, [j * m[0][0] + k * m[1][0], j * m[0][1] + k * m[1][1]])
    }

    fn negate(&self, i: usize) -> Self {
        let mut e = self.exponents;
        e[i] = -e[i];
        TorusElement::new(self.order, e)
    }
}

impl SymmetryMove {
    /// Given an element and coordinate point in the frame *after* this move,
    /// return the element and point in the frame *before* it that act the same.
    pub fn pull_back(&self, element: TorusElement, point: CoordinatePoint) -> (TorusElement, CoordinatePoint) {
        match *self {
            SymmetryMove::ConjugateTorus(i) => (element.negate(i.index()), point),
            SymmetryMove::ConjugateSphere(_) => (element, point),
            SymmetryMove::SwapTorus => {
                let [j, k] = element.exponents;
                (TorusElement::new(element.order, [k, j]), point)
            }
            SymmetryMove::SwapSphereFactors => (element, point.swapped()),
            SymmetryMove::Reparametrize(t) => (element.times(t.matrix()), point),
        }
    }

    /// Inverse of [`pull_back`](Self::pull_back).
    pub fn push_forward(&self, element: TorusElement, point: CoordinatePoint) -> (TorusElement, CoordinatePoint) {
        match *self {
            SymmetryMove::Reparametrize(t) => (element.times(t.inverse().matrix()), point),
            // every other move is an involution on elements and points
            _ => self.pull_back(element, point),
        }
    }
}

// ----------------------------------------------------------------------------
// SU(2) biquotient ⟷ S³ weights

/// Exponent pairs `(z, w)` of a linear `T²` action on one `S³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SphereWeights {
    pub p: (i64, i64),
    pub q: (i64, i64),
}

/// Exponents of the biquotient `T²` action on `SU(2)`
/// `U ↦ diag(z^A w^B, ·) U diag(z^C w^D, ·)⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct Su2Exponents {
    pub A: i64,
    pub B: i64,
    pub C: i64,
    pub D: i64,
}

/// Under `[[p, q], [-q̄, p̄]] ↦ (p, q)`, left multiplication by
/// `diag(λ, λ̄)` and right multiplication by `diag(ρ, ρ̄)⁻¹` send
/// `p ↦ λρ̄ p` and `q ↦ λρ q`.
#[allow(non_snake_case)]
pub fn sphere_weights_from_su2(A: i64, B: i64, C: i64, D: i64) -> SphereWeights {
    SphereWeights { p: (A - C, B - D), q: (A + C, B + D) }
}

/// Lift even sphere weights `p = (2a, 2b)`, `q = (2c, 2d)` to the biquotient
/// exponents `(a+c, b+d, a−c, b−d)`.
///
/// The result maps back under [`sphere_weights_from_su2`] to the same action
/// with `p` and `q` interchanged, which is orbit equivalent through
/// `(p, q) ↦ (q, p)`.
pub fn su2_from_sphere_weights(weights: SphereWeights) -> Result<Su2Exponents> {
    let all = [weights.p.0, weights.p.1, weights.q.0, weights.q.1];
    if all.iter().any(|x| x.is_odd()) {
        return Err(Error::NoLift(format!("{all:?}")));
    }
    let [a, b, c, d] = all.map(|x| x / 2);
    Ok(Su2Exponents { A: a + c, B: b + d, C: a - c, D: b - d })
}
