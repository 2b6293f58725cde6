//! Diffeomorphism types of the quotients and the static table of
//! non-homogeneous biquotients in dimensions 4 and 5.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::actions::{CircleWeights, TorusWeights};
use crate::error::{Error, Result};
use crate::freeness::{admissibility_class, circle_effectively_free, torus_weights_free, Admissibility};
use crate::lattice::NormalizedTorus;
use crate::swclass::w2_of_circle_quotient;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiffeoType {
    S4,
    CP2,
    S2xS2,
    #[serde(rename = "CP2+CP2")]
    Cp2PlusCp2,
    #[serde(rename = "CP2-CP2")]
    Cp2MinusCp2,
    S5,
    WuManifold,
    S3xS2,
    S3twistS2,
}

impl DiffeoType {
    pub const ALL: [DiffeoType; 9] = [
        DiffeoType::S4,
        DiffeoType::CP2,
        DiffeoType::S2xS2,
        DiffeoType::Cp2PlusCp2,
        DiffeoType::Cp2MinusCp2,
        DiffeoType::S5,
        DiffeoType::WuManifold,
        DiffeoType::S3xS2,
        DiffeoType::S3twistS2,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            DiffeoType::S4 => "S4",
            DiffeoType::CP2 => "CP2",
            DiffeoType::S2xS2 => "S2xS2",
            DiffeoType::Cp2PlusCp2 => "CP2+CP2",
            DiffeoType::Cp2MinusCp2 => "CP2-CP2",
            DiffeoType::S5 => "S5",
            DiffeoType::WuManifold => "WuManifold",
            DiffeoType::S3xS2 => "S3xS2",
            DiffeoType::S3twistS2 => "S3twistS2",
        }
    }

    pub fn pretty(self) -> &'static str {
        match self {
            DiffeoType::S4 => "S⁴",
            DiffeoType::CP2 => "ℂP²",
            DiffeoType::S2xS2 => "S²×S²",
            DiffeoType::Cp2PlusCp2 => "ℂP²#ℂP²",
            DiffeoType::Cp2MinusCp2 => "ℂP²#−ℂP²",
            DiffeoType::S5 => "S⁵",
            DiffeoType::WuManifold => "SU(3)/SO(3)",
            DiffeoType::S3xS2 => "S³×S²",
            DiffeoType::S3twistS2 => "S³×̂S²",
        }
    }

    pub fn dimension(self) -> u32 {
        match self {
            DiffeoType::S4
            | DiffeoType::CP2
            | DiffeoType::S2xS2
            | DiffeoType::Cp2PlusCp2
            | DiffeoType::Cp2MinusCp2 => 4,
            _ => 5,
        }
    }
}

impl fmt::Display for DiffeoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for DiffeoType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DiffeoType::ALL
            .into_iter()
            .find(|t| t.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown manifold tag {s:?}")))
    }
}

/// `S³×S²` for the gcd1 class, `S³×̂S²` for gcd4, cross-checked against `w₂`.
pub fn classify_circle(w: &CircleWeights) -> Result<DiffeoType> {
    let verdict = circle_effectively_free(w);
    if !verdict.is_effectively_free() {
        return Err(Error::Rejected(Box::new(verdict)));
    }
    let (ty, expected_w2) = match admissibility_class(w) {
        Admissibility::Gcd1 => (DiffeoType::S3xS2, 0),
        Admissibility::Gcd4 => (DiffeoType::S3twistS2, 1),
        Admissibility::Inadmissible => {
            return Err(Error::Internal(format!("effectively free {w} is inadmissible")));
        }
    };
    let w2 = w2_of_circle_quotient(w)?;
    if w2 != expected_w2 {
        return Err(Error::Internal(format!("{w}: class {ty} but w2 = {w2}")));
    }
    Ok(ty)
}

/// Type of a free normalized action, read off from `β` and `γ`.
pub fn classify_normalized(n: &NormalizedTorus) -> Result<DiffeoType> {
    let (beta, gamma) = (n.beta as i128, n.gamma as i128);
    match beta * gamma {
        // after swapping the torus factors if necessary, γ = 0 and the
        // remaining exponent decides
        0 => {
            let exponent = if gamma == 0 { beta } else { gamma };
            Ok(if exponent % 2 == 0 { DiffeoType::S2xS2 } else { DiffeoType::Cp2MinusCp2 })
        }
        2 => Ok(DiffeoType::Cp2PlusCp2),
        _ => Err(Error::Internal(format!("{n} has |1 − βγ| ≠ 1 after a free verdict"))),
    }
}

pub fn classify_torus(w: &TorusWeights) -> Result<DiffeoType> {
    let decision = torus_weights_free(w)?;
    if !decision.verdict.is_effectively_free() {
        return Err(Error::Rejected(Box::new(decision.verdict)));
    }
    let normal = decision
        .normal_form()
        .ok_or_else(|| Error::Internal(format!("effectively free {w} has no normal form")))?;
    classify_normalized(&normal.normalized)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatexCells {
    pub manifold: String,
    pub group_g: String,
    pub group_h: String,
    pub embedding: String,
}

/// One row of the table: the manifold, `G`, `H`, and the image of `H` in `G×G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub dimension: u32,
    pub manifold: DiffeoType,
    pub group_g: String,
    pub group_h: String,
    pub embedding: String,
    /// `1` or `2` on the circle rows: the value of `gcd(a²−c², b²−d²)` is 1 or 4.
    pub subscript: Option<u8>,
    /// The cells as typeset.
    pub latex: LatexCells,
}

static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();

pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG.get_or_init(|| {
        serde_json::from_str(include_str!("../data/catalog.json")).expect("embedded catalog parses")
    })
}

pub fn catalog_lookup(dimension: u32, filter: Option<DiffeoType>) -> Result<Vec<CatalogEntry>> {
    if !matches!(dimension, 4 | 5) {
        return Err(Error::invalid(format!("catalog covers dimensions 4 and 5, not {dimension}")));
    }
    Ok(catalog()
        .iter()
        .filter(|e| e.dimension == dimension && filter.is_none_or(|t| e.manifold == t))
        .cloned()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tw(r0: [i64; 4], r1: [i64; 4]) -> TorusWeights {
        TorusWeights::new([r0, r1]).unwrap()
    }

    fn normalized(t: [i64; 4]) -> TorusWeights {
        NormalizedTorus::new(t[0], t[1], t[2], t[3]).unwrap().to_weights().unwrap()
    }

    #[test]
    fn circle_examples() {
        assert_eq!(classify_circle(&CircleWeights::new([1, 0, 0, 1]).unwrap()).unwrap(), DiffeoType::S3xS2);
        assert_eq!(classify_circle(&CircleWeights::new([3, 2, 1, 0]).unwrap()).unwrap(), DiffeoType::S3twistS2);
        match classify_circle(&CircleWeights::new([1, 1, 1, 1]).unwrap()) {
            Err(Error::Rejected(v)) => assert!(v.witness.is_some()),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn torus_examples() {
        assert_eq!(classify_torus(&normalized([1, 0, 0, 1])).unwrap(), DiffeoType::S2xS2);
        assert_eq!(classify_torus(&normalized([1, 3, 0, 1])).unwrap(), DiffeoType::Cp2MinusCp2);
        assert_eq!(classify_torus(&normalized([1, 1, 2, 1])).unwrap(), DiffeoType::Cp2PlusCp2);
        assert_eq!(classify_torus(&tw([1, 1, 0, 0], [0, 2, 1, 1])).unwrap(), DiffeoType::S2xS2);
        match classify_torus(&tw([1, 0, 1, 0], [0, 1, 0, 1])) {
            Err(Error::Rejected(v)) => assert_eq!(v.status, crate::freeness::Status::Degenerate),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn swapped_exponent_decides() {
        // β = 0, γ odd: the swap moves γ into the β slot
        assert_eq!(classify_normalized(&NormalizedTorus::new(1, 0, 3, 1).unwrap()).unwrap(), DiffeoType::Cp2MinusCp2);
        assert_eq!(classify_normalized(&NormalizedTorus::new(1, 0, -4, 1).unwrap()).unwrap(), DiffeoType::S2xS2);
        assert_eq!(classify_normalized(&NormalizedTorus::new(1, 2, 1, 1).unwrap()).unwrap(), DiffeoType::Cp2PlusCp2);
    }

    #[test]
    fn catalog_rows() {
        let four = catalog_lookup(4, None).unwrap();
        assert_eq!(four.len(), 10);
        let s4 = catalog_lookup(4, Some(DiffeoType::S4)).unwrap();
        assert_eq!(s4.len(), 5);
        assert_eq!(s4[0].group_g, "Sp(2)");
        assert_eq!(s4[0].group_h, "Sp(1)²");
        assert_eq!(s4[0].embedding, "Sp(1)×ΔSp(1)");
        let five = catalog_lookup(5, None).unwrap();
        assert_eq!(five.iter().map(|e| e.subscript).collect::<Vec<_>>(), vec![Some(1), Some(2)]);
        assert!(matches!(catalog_lookup(6, None), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn tags_round_trip() {
        for t in DiffeoType::ALL {
            assert_eq!(t.tag().parse::<DiffeoType>().unwrap(), t);
            assert_eq!(serde_json::to_string(&t).unwrap(), format!("\"{}\"", t.tag()));
        }
    }
}
