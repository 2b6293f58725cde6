//! Second Stiefel–Whitney class of circle quotients of `SU(2)×SU(2)`.
//!
//! Everything is computed in mod-2 cohomology of classifying spaces of
//! maximal elementary abelian 2-subgroups, truncated at degree 2:
//!
//! * `H*(BQ) = GF(2)[x₁, …, xₙ]` with generators dual to a basis of `Q`;
//! * the characteristic class of the quotient is the pullback of
//!   `Π(1 + ρ)` over the 2-roots of the big group, times the inverse of the
//!   same product for the acting group;
//! * the pullback is induced by the restriction of the defining homomorphism
//!   to 2-subgroups, which is read off from exponent parities at `z = −1`.
//!
//! Free actions (`gcd(a²−c², b²−d²) = 1`) are computed on `SU(2)×SU(2)`
//! directly. Actions with a kernel of order 2 are first lifted to a free
//! action on `U(2)×U(2)` with the same orbits through `SU(2)×SU(2)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, LazyLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::actions::{content, CircleWeights};
use crate::error::{Error, Result};
use crate::freeness::{admissibility_class, circle_effectively_free, Admissibility};

/// A polynomial ring over GF(2) in named degree-1 generators, truncated above
/// a degree bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gf2Ring {
    generators: Arc<[String]>,
    degree_bound: u32,
}

impl Gf2Ring {
    pub fn new<S: Into<String>>(generators: impl IntoIterator<Item = S>, degree_bound: u32) -> Self {
        Gf2Ring { generators: generators.into_iter().map(Into::into).collect(), degree_bound }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn zero(&self) -> GF2Poly {
        GF2Poly { ring: self.clone(), terms: BTreeSet::new() }
    }

    pub fn one(&self) -> GF2Poly {
        self.monomial(vec![0; self.rank()])
    }

    pub fn var(&self, i: usize) -> GF2Poly {
        let mut e = vec![0; self.rank()];
        e[i] = 1;
        self.monomial(e)
    }

    pub fn var_named(&self, name: &str) -> Result<GF2Poly> {
        let i = self
            .generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| Error::invalid(format!("no generator named {name}")))?;
        Ok(self.var(i))
    }

    /// `x₁^{e₁}⋯xₙ^{eₙ}`, or zero when it exceeds the degree bound.
    pub fn monomial(&self, exponents: Vec<u32>) -> GF2Poly {
        assert_eq!(exponents.len(), self.rank(), "monomial arity");
        let mut terms = BTreeSet::new();
        if exponents.iter().sum::<u32>() <= self.degree_bound {
            terms.insert(exponents);
        }
        GF2Poly { ring: self.clone(), terms }
    }
}

/// An element of a [`Gf2Ring`]; the set of monomials with coefficient 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GF2Poly {
    ring: Gf2Ring,
    terms: BTreeSet<Vec<u32>>,
}

fn degree_of(m: &[u32]) -> u32 {
    m.iter().sum()
}

impl GF2Poly {
    pub fn ring(&self) -> &Gf2Ring {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = &[u32]> {
        self.terms.iter().map(Vec::as_slice)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_unit_constant(&self) -> bool {
        self.terms.iter().any(|m| degree_of(m) == 0)
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|m| degree_of(m)).max()
    }

    fn check_ring(&self, other: &GF2Poly) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::invalid(format!(
                "ring mismatch: {:?}/{} vs {:?}/{}",
                self.ring.generators, self.ring.degree_bound, other.ring.generators, other.ring.degree_bound
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &GF2Poly) -> Result<GF2Poly> {
        self.check_ring(other)?;
        let terms = self.terms.symmetric_difference(&other.terms).cloned().collect();
        Ok(GF2Poly { ring: self.ring.clone(), terms })
    }

    pub fn try_mul(&self, other: &GF2Poly) -> Result<GF2Poly> {
        self.check_ring(other)?;
        let bound = self.ring.degree_bound;
        let mut terms = BTreeSet::new();
        for m in &self.terms {
            for n in &other.terms {
                if degree_of(m) + degree_of(n) > bound {
                    continue;
                }
                let prod: Vec<u32> = m.iter().zip(n).map(|(x, y)| x + y).collect();
                // characteristic 2: a repeated monomial cancels
                if !terms.insert(prod.clone()) {
                    terms.remove(&prod);
                }
            }
        }
        Ok(GF2Poly { ring: self.ring.clone(), terms })
    }

    pub fn pow(&self, k: u32) -> GF2Poly {
        (0..k).fold(self.ring.one(), |acc, _| acc.try_mul(self).expect("same ring"))
    }

    /// Drop every term of degree above `k`.
    pub fn truncated(&self, k: u32) -> GF2Poly {
        let terms = self.terms.iter().filter(|m| degree_of(m) <= k).cloned().collect();
        GF2Poly { ring: self.ring.clone(), terms }
    }

    pub fn homogeneous_part(&self, k: u32) -> GF2Poly {
        let terms = self.terms.iter().filter(|m| degree_of(m) == k).cloned().collect();
        GF2Poly { ring: self.ring.clone(), terms }
    }

    /// Inverse of a unit, as the truncated series `Σ xᵏ` for `self = 1 + x`.
    pub fn inverse(&self) -> Result<GF2Poly> {
        if !self.has_unit_constant() {
            return Err(Error::invalid(format!("{self} has zero constant term and is not a unit")));
        }
        let x = self.try_add(&self.ring.one())?;
        let mut inv = self.ring.one();
        let mut power = self.ring.one();
        for _ in 0..self.ring.degree_bound {
            power = power.try_mul(&x)?;
            inv = inv.try_add(&power)?;
        }
        Ok(inv)
    }

    /// Apply the ring homomorphism sending generator `i` to `images[i]`.
    pub fn substitute(&self, images: &[GF2Poly], target: &Gf2Ring) -> Result<GF2Poly> {
        if images.len() != self.ring.rank() {
            return Err(Error::invalid("one image per generator required"));
        }
        if let Some(bad) = images.iter().find(|p| p.ring != *target) {
            return Err(Error::invalid(format!("image {bad} lies outside the target ring")));
        }
        let mut out = target.zero();
        for m in &self.terms {
            let mut value = target.one();
            for (img, &e) in images.iter().zip(m) {
                value = value.try_mul(&img.pow(e))?;
            }
            out = out.try_add(&value)?;
        }
        Ok(out)
    }
}

pub fn gf2_mul(p: &GF2Poly, q: &GF2Poly) -> Result<GF2Poly> {
    p.try_mul(q)
}

impl std::ops::Add for &GF2Poly {
    type Output = GF2Poly;
    /// Panics when the operands live in different rings.
    fn add(self, rhs: &GF2Poly) -> GF2Poly {
        self.try_add(rhs).expect("GF2Poly addition across rings")
    }
}

impl std::ops::Mul for &GF2Poly {
    type Output = GF2Poly;
    /// Panics when the operands live in different rings.
    fn mul(self, rhs: &GF2Poly) -> GF2Poly {
        self.try_mul(rhs).expect("GF2Poly multiplication across rings")
    }
}

impl fmt::Display for GF2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // graded order: constant first
        let mut terms: Vec<&Vec<u32>> = self.terms.iter().collect();
        terms.sort_by_key(|m| (degree_of(m), std::cmp::Reverse((*m).clone())));
        let rendered: Vec<String> = terms
            .iter()
            .map(|m| {
                let parts: Vec<String> = m
                    .iter()
                    .zip(self.ring.generators.iter())
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, g)| if *e == 1 { g.clone() } else { format!("{g}^{e}") })
                    .collect();
                if parts.is_empty() { "1".to_string() } else { parts.join("") }
            })
            .collect();
        f.write_str(&rendered.join(" + "))
    }
}

// ----------------------------------------------------------------------------
// Groups, 2-roots and 2-group homomorphisms

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupDescriptor {
    /// `SU(2)×SU(2)`; maximal 2-group `{±I}²`.
    Su2xSu2,
    /// `S¹`; maximal 2-group `{±1}`.
    Circle,
    /// `U(2)×U(2)`; maximal 2-group the diagonal `±1` matrices.
    U2xU2,
}

impl FromStr for GroupDescriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SU(2)xSU(2)" | "SU(2)×SU(2)" | "su2xsu2" => Ok(GroupDescriptor::Su2xSu2),
            "S1" | "S¹" | "U(1)" | "circle" => Ok(GroupDescriptor::Circle),
            "U(2)xU(2)" | "U(2)×U(2)" | "u2xu2" => Ok(GroupDescriptor::U2xU2),
            other => Err(Error::invalid(format!("unknown group descriptor {other:?}"))),
        }
    }
}

/// Generators of `H¹` of the classifying space of the maximal 2-group.
pub fn two_group_generators(group: GroupDescriptor) -> &'static [&'static str] {
    match group {
        GroupDescriptor::Su2xSu2 => &["ε1", "ε2"],
        GroupDescriptor::Circle => &["w"],
        // λᵢ dual to (diag with −1 in slot i, I), μᵢ likewise in the second factor
        GroupDescriptor::U2xU2 => &["λ1", "λ2", "μ1", "μ2"],
    }
}

/// Nontrivial 2-roots as linear forms (indicator vectors over the
/// generators), with multiplicity.
pub fn two_roots(group: GroupDescriptor) -> Vec<(Vec<bool>, u32)> {
    match group {
        GroupDescriptor::Su2xSu2 | GroupDescriptor::Circle => Vec::new(),
        // off-diagonal root spaces of each U(2): λ₁ − λ₂ and μ₁ − μ₂, twice each
        GroupDescriptor::U2xU2 => vec![
            (vec![true, true, false, false], 2),
            (vec![false, false, true, true], 2),
        ],
    }
}

pub fn two_group_ring(group: GroupDescriptor, degree_bound: u32) -> Gf2Ring {
    Gf2Ring::new(two_group_generators(group).iter().copied(), degree_bound)
}

/// `Π (1 + ρ)` over the 2-roots of `group`, with multiplicity.
pub fn two_roots_product(group: GroupDescriptor, degree_bound: u32) -> GF2Poly {
    let ring = two_group_ring(group, degree_bound);
    let mut product = ring.one();
    for (form, mult) in two_roots(group) {
        let mut factor = ring.one();
        for (i, _) in form.iter().enumerate().filter(|(_, on)| **on) {
            factor = &factor + &ring.var(i);
        }
        product = &product * &factor.pow(mult);
    }
    product
}

/// `H*(B(Q×Q)) = H*(BQ) ⊗ H*(BQ)`, generators `x⊗1` then `1⊗x`.
pub fn doubled_ring(group: GroupDescriptor, degree_bound: u32) -> Gf2Ring {
    let g = two_group_generators(group);
    let left = g.iter().map(|x| format!("{x}⊗1"));
    let right = g.iter().map(|x| format!("1⊗{x}"));
    Gf2Ring::new(left.chain(right), degree_bound)
}

/// Embed `p ∈ H*(BQ)` as `p ⊗ 1` in the doubled ring.
pub fn left_slot(p: &GF2Poly, doubled: &Gf2Ring) -> Result<GF2Poly> {
    let n = p.ring().rank();
    if doubled.rank() != 2 * n {
        return Err(Error::invalid("doubled ring has the wrong rank"));
    }
    let images: Vec<GF2Poly> = (0..n).map(|i| doubled.var(i)).collect();
    p.substitute(&images, doubled)
}

/// Restriction `Q_H → Q_G × Q_G` of a homomorphism to maximal 2-groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoGroupHom {
    pub source_rank: usize,
    /// Names of the target generators (duals of the target basis).
    pub target_generators: Vec<String>,
    /// `images[s][t]`: coordinate `t` of the image of source basis element `s`.
    pub images: Vec<Vec<bool>>,
}

impl TwoGroupHom {
    /// Induced map on cohomology: target generator `t` pulls back to
    /// `Σₛ images[s][t] · xₛ`.
    pub fn pullback(&self, p: &GF2Poly, source: &Gf2Ring) -> Result<GF2Poly> {
        if p.ring().generators() != self.target_generators.as_slice() {
            return Err(Error::invalid("polynomial is not in the target ring of this homomorphism"));
        }
        if source.rank() != self.source_rank {
            return Err(Error::invalid("source ring rank mismatch"));
        }
        let images: Vec<GF2Poly> = (0..self.target_generators.len())
            .map(|t| {
                (0..self.source_rank)
                    .filter(|&s| self.images[s][t])
                    .fold(source.zero(), |acc, s| &acc + &source.var(s))
            })
            .collect();
        p.substitute(&images, source)
    }

    /// Indices of target generators pulled back nontrivially by source element 0.
    pub fn support(&self) -> Vec<usize> {
        (0..self.target_generators.len()).filter(|&t| self.images[0][t]).collect()
    }
}

// ----------------------------------------------------------------------------
// The lift to U(2)×U(2)

/// Free circle action on `U(2)×U(2)`:
/// `z * (A, B) = (diag(z^a, 1) A diag(z^{(a+c)/2}, z^{(a−c)/2})⁻¹, …)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LiftedAction {
    /// Diagonal exponents of the left factors: `(a, 0)`, `(b, 0)`.
    pub left: [(i64, i64); 2],
    /// Diagonal exponents of the right factors:
    /// `((a+c)/2, (a−c)/2)`, `((b+d)/2, (b−d)/2)`.
    pub right: [(i64, i64); 2],
}

impl LiftedAction {
    /// `gcd(a, (a+c)/2, b, (b+d)/2)`; the lift is free iff this is 1.
    pub fn freeness_gcd(&self) -> i64 {
        content(&[self.left[0].0, self.right[0].0, self.left[1].0, self.right[1].0])
    }

    /// Both sides have the same total exponent in each factor, so the action
    /// commutes with the determinant `U(2)×U(2) → T²`.
    pub fn preserves_determinant(&self) -> bool {
        (0..2).all(|i| self.left[i].0 + self.left[i].1 == self.right[i].0 + self.right[i].1)
    }

    /// The eight diagonal exponents in doubled-ring generator order
    /// `λ1⊗1, λ2⊗1, μ1⊗1, μ2⊗1, 1⊗λ1, 1⊗λ2, 1⊗μ1, 1⊗μ2`.
    pub fn exponents(&self) -> [i64; 8] {
        let [(a, a0), (b, b0)] = self.left;
        let [(r1, r2), (s1, s2)] = self.right;
        [a, a0, b, b0, r1, r2, s1, s2]
    }
}

pub fn u2_lift(w: &CircleWeights) -> Result<LiftedAction> {
    if admissibility_class(w) != Admissibility::Gcd4 {
        return Err(Error::Precondition(format!("{w} is not in the gcd4 class")));
    }
    let [a, b, c, d] = w.tuple();
    if [a + c, a - c, b + d, b - d].iter().any(|x| x.is_odd()) {
        return Err(Error::Internal(format!("gcd4 tuple {w} has an odd a±c or b±d")));
    }
    let lift = LiftedAction {
        left: [(a, 0), (b, 0)],
        right: [((a + c) / 2, (a - c) / 2), ((b + d) / 2, (b - d) / 2)],
    };
    if lift.freeness_gcd() != 1 {
        return Err(Error::Internal(format!(
            "lift of {w} is not free: gcd {}",
            lift.freeness_gcd()
        )));
    }
    Ok(lift)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParitySplit {
    /// The tuple with the odd exponent among `a, b` in the first factor.
    pub weights: CircleWeights,
    /// Whether the two `SU(2)` factors were interchanged.
    pub swapped: bool,
}

/// In the gcd4 class exactly one of `a`, `b` is odd; move it to the front.
pub fn parity_split(w: &CircleWeights) -> Result<ParitySplit> {
    if admissibility_class(w) != Admissibility::Gcd4 {
        return Err(Error::Precondition(format!("{w} is not in the gcd4 class")));
    }
    let [a, b, c, d] = w.tuple();
    match (a.is_odd(), b.is_odd()) {
        (true, false) => Ok(ParitySplit { weights: *w, swapped: false }),
        (false, true) => Ok(ParitySplit { weights: CircleWeights::new([b, a, d, c])?, swapped: true }),
        _ => Err(Error::Internal(format!("gcd4 tuple {w} has a, b of equal parity"))),
    }
}

/// `f(−1)` in the doubled maximal 2-group of `U(2)×U(2)`, from exponent parities.
pub fn pullback_hom(lift: &LiftedAction) -> TwoGroupHom {
    TwoGroupHom {
        source_rank: 1,
        target_generators: doubled_ring(GroupDescriptor::U2xU2, 0).generators().to_vec(),
        images: vec![lift.exponents().iter().map(|e| e.is_odd()).collect()],
    }
}

/// Same for the original action on `SU(2)×SU(2)`, where `f(−1)` has
/// components `(−1)^a I`, `(−1)^b I` on the left and `(−1)^c I`, `(−1)^d I`
/// on the right.
pub fn su2_pullback_hom(w: &CircleWeights) -> TwoGroupHom {
    let [a, b, c, d] = w.tuple();
    TwoGroupHom {
        source_rank: 1,
        target_generators: doubled_ring(GroupDescriptor::Su2xSu2, 0).generators().to_vec(),
        images: vec![[a, b, c, d].iter().map(|e| e.is_odd()).collect()],
    }
}

/// True iff the class lies in the image `GF(2)[w²]` of `H*(BS¹)` inside
/// `H*(B⟨−1⟩) = GF(2)[w]`.
pub fn borel_image_check(class: &GF2Poly) -> bool {
    class.ring().rank() == 1 && class.terms().all(|m| m[0] % 2 == 0)
}

const DEGREE: u32 = 2;

static CIRCLE_RING: LazyLock<Gf2Ring> = LazyLock::new(|| two_group_ring(GroupDescriptor::Circle, DEGREE));

/// `Π(1+ρ)` of `group` placed in the `x ⊗ 1` slot of the doubled ring.
fn doubled_product(group: GroupDescriptor) -> GF2Poly {
    let doubled = doubled_ring(group, DEGREE);
    left_slot(&two_roots_product(group, DEGREE), &doubled).expect("ranks match by construction")
}

static SU2_PRODUCT: LazyLock<GF2Poly> = LazyLock::new(|| doubled_product(GroupDescriptor::Su2xSu2));
static U2_PRODUCT: LazyLock<GF2Poly> = LazyLock::new(|| doubled_product(GroupDescriptor::U2xU2));

/// Full record of the characteristic-class computation for a circle action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwComputation {
    pub class: Admissibility,
    pub lift: Option<LiftedAction>,
    pub hom: TwoGroupHom,
    /// Total class in `GF(2)[w]`, truncated at degree 2.
    pub total: GF2Poly,
    pub w2: u8,
}

/// Run the pullback pipeline: the free branch on `SU(2)×SU(2)`, the kernel-2
/// branch through the `U(2)×U(2)` lift.
pub fn circle_sw_computation(w: &CircleWeights) -> Result<SwComputation> {
    let verdict = circle_effectively_free(w);
    if !verdict.is_effectively_free() {
        return Err(Error::Rejected(Box::new(verdict)));
    }
    let class = admissibility_class(w);
    let (lift, hom, product) = match class {
        Admissibility::Gcd1 => (None, su2_pullback_hom(w), &*SU2_PRODUCT),
        Admissibility::Gcd4 => {
            let split = parity_split(w)?;
            let lift = u2_lift(&split.weights)?;
            (Some(lift), pullback_hom(&lift), &*U2_PRODUCT)
        }
        Admissibility::Inadmissible => {
            return Err(Error::Internal(format!("effectively free {w} is inadmissible")));
        }
    };
    let ring = &*CIRCLE_RING;
    let group_part = hom.pullback(product, ring)?;
    let circle_part = two_roots_product(GroupDescriptor::Circle, DEGREE).inverse()?;
    let total = group_part.try_mul(&circle_part)?;
    if !borel_image_check(&total) {
        return Err(Error::Internal(format!("class {total} of {w} is outside GF(2)[w²]")));
    }
    let w2 = u8::from(!total.homogeneous_part(2).is_zero());
    Ok(SwComputation { class, lift, hom, total, w2 })
}

/// `w₂` of the quotient: 0 for `S³×S²`, 1 for the twisted bundle.
pub fn w2_of_circle_quotient(w: &CircleWeights) -> Result<u8> {
    circle_sw_computation(w).map(|c| c.w2)
}
