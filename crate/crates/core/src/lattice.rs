//! Normalization of 2-torus weight matrices.
//!
//! For an effectively free action the rational row span of the weight matrix
//! has a unique integer basis of the shape
//!
//! ```text
//! (1, α, 0, γ)
//! (0, β, 1, δ)
//! ```
//!
//! i.e. `z` acts on `p₁` with weight 1 and not on `p₂`, and `w` the other way
//! around. Sign conjugations and the simultaneous swap `z ↔ w`,
//! `S³₁ ↔ S³₂` then bring `(α, β, γ, δ)` into a canonical form.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::actions::{content, CoordinatePoint, Slot, SphereCoord, SymmetryMove, TorusCoord, TorusElement, TorusWeights};
use crate::error::{Error, Result};
use crate::freeness::{FixedPoint, Witness};

/// Exponents of the action
/// `(z, w) * ((p₁, q₁), (p₂, q₂)) = ((z p₁, z^α w^β q₁), (w p₂, z^γ w^δ q₂))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormalizedTorus {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub delta: i64,
}

impl NormalizedTorus {
    /// Requires `α, β, δ ≥ 0`; `γ` is unrestricted.
    pub fn new(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Result<Self> {
        if alpha < 0 || beta < 0 || delta < 0 {
            return Err(Error::invalid(format!(
                "normalized exponents need α, β, δ ≥ 0, got ({alpha},{beta},{gamma},{delta})"
            )));
        }
        Ok(NormalizedTorus { alpha, beta, gamma, delta })
    }

    pub fn tuple(&self) -> [i64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    pub fn rows(&self) -> [[i64; 4]; 2] {
        [[1, self.alpha, 0, self.gamma], [0, self.beta, 1, self.delta]]
    }

    pub fn to_weights(&self) -> Result<TorusWeights> {
        TorusWeights::new(self.rows())
    }

    /// `αδ − βγ`, the determinant of the `q₁`, `q₂` columns.
    pub fn determinant(&self) -> i128 {
        self.alpha as i128 * self.delta as i128 - self.beta as i128 * self.gamma as i128
    }
}

impl fmt::Display for NormalizedTorus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(α,β,γ,δ)=({},{},{},{})", self.alpha, self.beta, self.gamma, self.delta)
    }
}

/// Successful normalization of a weight matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationResult {
    pub normalized: NormalizedTorus,
    /// Rows `(1, α', 0, γ')` and `(0, β', 1, δ')` spanning the same rational
    /// space as the input, before sign normalization.
    pub basis: [[i64; 4]; 2],
    /// Index of the input row lattice inside the lattice spanned by `basis`;
    /// equals `|D|` and the order of the ineffective kernel.
    pub lattice_index: u64,
    /// Moves taking `basis` to the rows of `normalized`, in application order.
    pub moves: Vec<SymmetryMove>,
}

impl NormalizationResult {
    /// Coordinates of the input rows in `basis`: `W = C · basis`.
    fn change_of_basis(weights: &TorusWeights) -> [[i64; 2]; 2] {
        let (a, b) = weights.column(0);
        let (e, f) = weights.column(2);
        [[a, e], [b, f]]
    }

    /// Express an element acting on the normalized action as an element of
    /// the input torus acting identically, together with the corresponding
    /// coordinate point.
    pub fn element_in_input(
        &self,
        weights: &TorusWeights,
        element: TorusElement,
        point: CoordinatePoint,
    ) -> Result<(TorusElement, CoordinatePoint)> {
        let (elem, point) = self.moves.iter().rev().fold((element, point), |(e, p), mv| mv.pull_back(e, p));
        // t_W = t_basis · C⁻¹ with C⁻¹ = adj(C) / D
        let [[a, e], [b, f]] = Self::change_of_basis(weights);
        let det = a * f - b * e;
        let [j, k] = elem.exponents;
        let order = (elem.order as i64)
            .checked_mul(det.abs())
            .ok_or(Error::Overflow("witness transport"))?;
        let x = (j as i128 * f as i128 - k as i128 * b as i128) * det.signum() as i128;
        let y = (-(j as i128) * e as i128 + k as i128 * a as i128) * det.signum() as i128;
        let n = order as i128;
        let out = TorusElement::new(order as u64, [x.rem_euclid(n) as i64, y.rem_euclid(n) as i64]);
        Ok((out, point))
    }

    /// Inverse of [`element_in_input`](Self::element_in_input).
    pub fn element_in_normalized(
        &self,
        weights: &TorusWeights,
        element: TorusElement,
        point: CoordinatePoint,
    ) -> (TorusElement, CoordinatePoint) {
        let c = Self::change_of_basis(weights);
        let start = (element.times(c), point);
        self.moves.iter().fold(start, |(e, p), mv| mv.push_forward(e, p))
    }
}

/// Outcome of [`normalize`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Normalization {
    Normal(NormalizationResult),
    /// `D = 0`: some circle subgroup fixes `((1,0),(1,0))`.
    Degenerate,
    /// The normal basis has `ν ≠ 1` or `κ ≠ 1`; the witness is expressed in
    /// the input coordinates.
    Ineffective { witness: Witness },
}

/// Integer vector on the ray through `v` with content 1 and positive first
/// nonzero entry.
pub fn primitive_vector(v: [Ratio<i64>; 4]) -> Result<[i64; 4]> {
    if v.iter().all(|x| *x.numer() == 0) {
        return Err(Error::invalid("zero vector has no primitive multiple"));
    }
    let l = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let mut ints = [0i64; 4];
    for (out, x) in ints.iter_mut().zip(v) {
        *out = x
            .numer()
            .checked_mul(l / x.denom())
            .ok_or(Error::Overflow("primitive vector"))?;
    }
    let g = content(&ints);
    let sign = ints.iter().find(|&&x| x != 0).map_or(1, |x| x.signum());
    Ok(ints.map(|x| sign * x / g))
}

fn primitive_int(v: [i64; 4]) -> Result<[i64; 4]> {
    primitive_vector(v.map(Ratio::from_integer))
}

fn combine(s: i64, r: &[i64; 4], t: i64, q: &[i64; 4]) -> Result<[i64; 4]> {
    let mut out = [0i64; 4];
    for j in 0..4 {
        out[j] = s
            .checked_mul(r[j])
            .and_then(|x| t.checked_mul(q[j]).and_then(|y| x.checked_add(y)))
            .ok_or(Error::Overflow("row combination"))?;
    }
    Ok(out)
}

/// Bring a weight matrix to normal form.
pub fn normalize(weights: &TorusWeights) -> Result<Normalization> {
    let [r1, r2] = weights.rows();
    let (a, b) = weights.column(0);
    let (e, f) = weights.column(2);
    let det = a * f - b * e;
    if det == 0 {
        return Ok(Normalization::Degenerate);
    }

    // span elements with p₂-entry 0 and p₁-entry 0
    let first = primitive_int(combine(f, &r1, -e, &r2)?)?;
    let mut second = primitive_int(combine(a, &r2, -b, &r1)?)?;
    if second[2] < 0 {
        second = second.map(|x| -x);
    }
    let nu = first[0];
    let kappa = second[2];
    if nu != 1 {
        // (z,1) with z a primitive ν-th root, i.e. the span element first/ν
        let witness = stabilizer_witness(Ratio::new(f, det), Ratio::new(-e, det));
        return Ok(Normalization::Ineffective { witness });
    }
    if kappa != 1 {
        let witness = stabilizer_witness(Ratio::new(-b, det), Ratio::new(a, det));
        return Ok(Normalization::Ineffective { witness });
    }

    let basis = [first, second];
    // orbit-equivalence certificate: W = C · basis exactly
    let c = NormalizationResult::change_of_basis(weights);
    for (i, (ci, row)) in c.iter().zip(weights.rows()).enumerate() {
        let rebuilt = combine(ci[0], &basis[0], ci[1], &basis[1])?;
        if rebuilt != row {
            return Err(Error::Internal(format!(
                "normal basis {basis:?} does not reproduce row {i} of {weights}"
            )));
        }
    }

    let (normalized, moves) = canonicalize(basis)?;
    Ok(Normalization::Normal(NormalizationResult {
        normalized,
        basis,
        lattice_index: det.unsigned_abs(),
        moves,
    }))
}

fn stabilizer_witness(x: Ratio<i64>, y: Ratio<i64>) -> Witness {
    let elem = TorusElement::from_fractions(x, y);
    Witness {
        order: elem.order,
        exponents: elem.exponents.to_vec(),
        fixed_point: FixedPoint::at(CoordinatePoint(Slot::P, Slot::P)),
        infinite_stabilizer: false,
    }
}

fn read_normal(rows: [[i64; 4]; 2]) -> Option<[i64; 4]> {
    let [[nu, alpha, z0, gamma], [z1, beta, kappa, delta]] = rows;
    (nu == 1 && kappa == 1 && z0 == 0 && z1 == 0).then_some([alpha, beta, gamma, delta])
}

const FLIP_GAMMA_DELTA: &[SymmetryMove] = &[SymmetryMove::ConjugateSphere(SphereCoord::Q2)];
const FLIP_ALPHA_GAMMA: &[SymmetryMove] = &[
    SymmetryMove::ConjugateTorus(TorusCoord::Z),
    SymmetryMove::ConjugateSphere(SphereCoord::P1),
];
const FLIP_BETA_GAMMA: &[SymmetryMove] = &[
    SymmetryMove::ConjugateSphere(SphereCoord::Q1),
    SymmetryMove::ConjugateTorus(TorusCoord::Z),
    SymmetryMove::ConjugateSphere(SphereCoord::P1),
];
const SWAP: &[SymmetryMove] = &[SymmetryMove::SwapTorus, SymmetryMove::SwapSphereFactors];

struct Candidate {
    weights: TorusWeights,
    moves: Vec<SymmetryMove>,
}

impl Candidate {
    fn exps(&self) -> [i64; 4] {
        read_normal(self.weights.rows()).expect("moves preserve the normal shape")
    }

    fn run(&mut self, moves: &[SymmetryMove]) -> Result<()> {
        for &mv in moves {
            self.weights = self.weights.apply(mv)?;
            self.moves.push(mv);
        }
        Ok(())
    }

    /// Make `α, β, δ ≥ 0`, and `γ ≥ 0` as well when a zero entry frees its sign.
    fn sign_normalize(&mut self) -> Result<()> {
        if self.exps()[0] < 0 {
            self.run(FLIP_ALPHA_GAMMA)?;
        }
        if self.exps()[1] < 0 {
            self.run(FLIP_BETA_GAMMA)?;
        }
        if self.exps()[3] < 0 {
            self.run(FLIP_GAMMA_DELTA)?;
        }
        let [alpha, beta, gamma, delta] = self.exps();
        if gamma < 0 {
            if alpha == 0 {
                self.run(FLIP_ALPHA_GAMMA)?;
            } else if beta == 0 {
                self.run(FLIP_BETA_GAMMA)?;
            } else if delta == 0 {
                self.run(FLIP_GAMMA_DELTA)?;
            }
        }
        Ok(())
    }

    /// Shapes a free action can take: `γ = 0`, or the exceptional `(β, γ) = (1, 2)`.
    fn admissible(&self) -> bool {
        let [_, beta, gamma, _] = self.exps();
        gamma == 0 || (beta, gamma) == (1, 2)
    }

    fn key(&self) -> (bool, [i64; 4]) {
        let [alpha, beta, gamma, delta] = self.exps();
        (!self.admissible(), [beta, gamma, alpha, delta])
    }
}

/// Canonical representative, under sign conjugations and the simultaneous
/// `z ↔ w`, `S³₁ ↔ S³₂` swap, of an action already in normal shape.
///
/// Both the input and its swap are sign-normalized; a candidate of a shape
/// that free actions take is preferred, then the lexicographically smaller
/// `(β, γ, α, δ)`.
pub fn canonicalize(basis: [[i64; 4]; 2]) -> Result<(NormalizedTorus, Vec<SymmetryMove>)> {
    if read_normal(basis).is_none() {
        return Err(Error::invalid(format!("{basis:?} is not of the form (1,α,0,γ)/(0,β,1,δ)")));
    }
    let weights = TorusWeights::new(basis)?;
    let mut plain = Candidate { weights, moves: Vec::new() };
    plain.sign_normalize()?;
    let mut swapped = Candidate { weights, moves: Vec::new() };
    swapped.run(SWAP)?;
    swapped.sign_normalize()?;
    let best = if swapped.key() < plain.key() { swapped } else { plain };
    let [alpha, beta, gamma, delta] = best.exps();
    Ok((NormalizedTorus::new(alpha, beta, gamma, delta)?, best.moves))
}

/// Row-style Hermite normal form of a 2×4 integer matrix: pivots positive,
/// the entry above the second pivot reduced into `[0, pivot)`, zero rows last.
pub fn hermite_normal_form(rows: [[i64; 4]; 2]) -> [[i64; 4]; 2] {
    let [mut r0, mut r1] = rows;
    let mut pivot_row = 0;
    let mut pivots = [None, None];
    for col in 0..4 {
        if pivot_row == 0 {
            // Euclid on the two rows in this column
            while r1[col] != 0 {
                let q = Integer::div_floor(&r0[col], &r1[col]);
                for j in 0..4 {
                    r0[j] -= q * r1[j];
                }
                std::mem::swap(&mut r0, &mut r1);
            }
            if r0[col] != 0 {
                if r0[col] < 0 {
                    r0 = r0.map(|x| -x);
                }
                pivots[0] = Some(col);
                pivot_row = 1;
            }
        } else if r1[col] != 0 {
            if r1[col] < 0 {
                r1 = r1.map(|x| -x);
            }
            let q = Integer::div_floor(&r0[col], &r1[col]);
            for j in 0..4 {
                r0[j] -= q * r1[j];
            }
            pivots[1] = Some(col);
            break;
        }
    }
    debug_assert!(pivots[0].is_some() || r0 == [0; 4]);
    [r0, r1]
}

/// Orbit invariant of a weight matrix under all [`SymmetryMove`]s: the
/// smallest Hermite normal form over column sign changes and the factor swap.
pub fn canonical_key(weights: &TorusWeights) -> [[i64; 4]; 2] {
    let rows = weights.rows();
    let mut best: Option<[[i64; 4]; 2]> = None;
    for swap in [false, true] {
        for signs in 0u8..16 {
            let variant = rows.map(|row| {
                let row = if swap { [row[2], row[3], row[0], row[1]] } else { row };
                let mut out = row;
                for (j, x) in out.iter_mut().enumerate() {
                    if signs & (1 << j) != 0 {
                        *x = -*x;
                    }
                }
                out
            });
            let h = hermite_normal_form(variant);
            if best.is_none_or(|b| h < b) {
                best = Some(h);
            }
        }
    }
    best.expect("at least one variant")
}
