//! Exhaustive agreement sweeps between the closed-form criteria, the
//! brute-force oracles and the characteristic-class pipeline.
//!
//! Work items are pure and evaluated in parallel; results are collected in
//! input order, so every report is deterministic.

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actions::{content, CircleMove, CircleWeights, SphereCoord, SymmetryMove, TorusCoord, TorusWeights, Unimodular};
use crate::classify::{classify_circle, classify_torus, DiffeoType};
use crate::error::Result;
use crate::freeness::{
    admissibility_class, circle_effectively_free, circle_fixed_point_oracle, circle_gcds, circle_oracle_depth,
    torus_fixed_point_oracle, torus_free, torus_oracle_depth, torus_weights_free, Admissibility, FreenessVerdict,
    Status, Witness,
};
use crate::lattice::NormalizedTorus;
use crate::swclass::{circle_sw_computation, parity_split, u2_lift};

/// Mismatch details kept per suite; the count is always exact.
pub const MAX_REPORTED: usize = 25;

pub type CircleCriterion = fn(&CircleWeights) -> FreenessVerdict;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub subject: String,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
}

impl Mismatch {
    fn new(subject: impl ToString, detail: impl Into<String>) -> Self {
        Mismatch { subject: subject.to_string(), detail: detail.into(), witnesses: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub checked: u64,
    pub mismatch_count: u64,
    pub mismatches: Vec<Mismatch>,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        SuiteOutcome { name: name.to_string(), checked: 0, mismatch_count: 0, mismatches: Vec::new() }
    }

    fn record(&mut self, m: Option<Mismatch>) {
        self.checked += 1;
        if let Some(m) = m {
            self.mismatch_count += 1;
            if self.mismatches.len() < MAX_REPORTED {
                self.mismatches.push(m);
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatch_count == 0
    }
}

/// Reduced tuples `(a,b,c,d)` with entries in `[−bound, bound]`, in
/// lexicographic order.
pub fn circle_range(bound: i64) -> Vec<CircleWeights> {
    let r = -bound..=bound;
    let mut out = Vec::new();
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    if content(&[a, b, c, d]) == 1 {
                        out.push(CircleWeights::new([a, b, c, d]).expect("nonzero tuple"));
                    }
                }
            }
        }
    }
    out
}

/// Normalized `(α, β, γ, δ)` with `0 ≤ α, β, δ ≤ bound` and `|γ| ≤ bound`.
pub fn normalized_range(bound: i64) -> Vec<NormalizedTorus> {
    let mut out = Vec::new();
    for alpha in 0..=bound {
        for beta in 0..=bound {
            for gamma in -bound..=bound {
                for delta in 0..=bound {
                    out.push(NormalizedTorus::new(alpha, beta, gamma, delta).expect("signs in range"));
                }
            }
        }
    }
    out
}

/// All nonzero 2×4 matrices with entries in `[−bound, bound]`.
pub fn torus_range(bound: i64) -> Vec<TorusWeights> {
    let side = (2 * bound + 1) as usize;
    let total = side.pow(8);
    (0..total)
        .filter_map(|mut idx| {
            let mut m = [[0i64; 4]; 2];
            for slot in m.iter_mut().flatten() {
                *slot = (idx % side) as i64 - bound;
                idx /= side;
            }
            TorusWeights::new(m).ok()
        })
        .collect()
}

/// A fixed generating set of torus symmetries.
pub fn standard_moves() -> Vec<SymmetryMove> {
    let mut moves = vec![SymmetryMove::ConjugateTorus(TorusCoord::Z), SymmetryMove::ConjugateTorus(TorusCoord::W)];
    moves.extend(SphereCoord::ALL.map(SymmetryMove::ConjugateSphere));
    moves.push(SymmetryMove::SwapTorus);
    moves.push(SymmetryMove::SwapSphereFactors);
    for m in [[[1, 1], [0, 1]], [[1, 0], [-1, 1]], [[2, 1], [1, 1]]] {
        moves.push(SymmetryMove::Reparametrize(Unimodular::new(m).expect("det 1")));
    }
    moves
}

/// The criterion with the mixed sign pairs `(+,−)`, `(−,+)` dropped; used to
/// exercise the mismatch path.
pub fn sign_flipped_criterion(w: &CircleWeights) -> FreenessVerdict {
    let [a, b, c, d] = w.tuple();
    match ((a + c).gcd(&(b + d)), (a - c).gcd(&(b - d))) {
        (1, 1) => FreenessVerdict::free(),
        (2, 2) => FreenessVerdict::effectively_free(2),
        _ => circle_effectively_free(w),
    }
}

fn same_verdict(x: &FreenessVerdict, y: &FreenessVerdict) -> bool {
    x.status == y.status && x.kernel_order == y.kernel_order
}

fn subject_verdict(name: &str, v: &FreenessVerdict) -> String {
    format!("{name}: {} (kernel {})", v.status, v.kernel_order)
}

/// Per-tuple results of the circle suites, in [`CIRCLE_SUITES`] order.
type CircleChecks = [Option<Mismatch>; 6];

pub const CIRCLE_SUITES: [&str; 6] = [
    "circle criterion vs oracle",
    "four-gcd pattern vs gcd(a²−c², b²−d²)",
    "w2 dichotomy",
    "parity of a, b in the gcd4 class",
    "lift freeness",
    "circle symmetry invariance",
];

fn check_circle(w: &CircleWeights, depth: Option<u64>, criterion: CircleCriterion) -> (CircleChecks, bool, bool) {
    let verdict = criterion(w);
    let truth = circle_effectively_free(w);
    let class = admissibility_class(w);
    let mut out: CircleChecks = Default::default();

    let report = circle_fixed_point_oracle(w, depth.unwrap_or_else(|| circle_oracle_depth(w)));
    let witness_bad = verdict.witness.as_ref().is_some_and(|wit| !wit.validate_circle(w));
    if !same_verdict(&verdict, &report.verdict) || witness_bad {
        let mut m = Mismatch::new(
            w,
            format!("{} / {}", subject_verdict("criterion", &verdict), subject_verdict("oracle", &report.verdict)),
        );
        m.witnesses = report.witnesses.iter().take(4).cloned().collect();
        m.witnesses.extend(verdict.witness.clone());
        out[0] = Some(m);
    }

    let gcds = circle_gcds(w);
    let all = |g: i64| gcds.iter().all(|&x| x == g);
    if all(1) != (class == Admissibility::Gcd1) || all(2) != (class == Admissibility::Gcd4) {
        out[1] = Some(Mismatch::new(w, format!("gcds {gcds:?} but class {class}")));
    }
    let admissible = class != Admissibility::Inadmissible;
    if admissible != truth.is_effectively_free() {
        out[1] = Some(Mismatch::new(w, format!("class {class} but verdict {}", truth.status)));
    }

    let in_dichotomy = truth.is_effectively_free();
    if in_dichotomy {
        let expected = u8::from(class == Admissibility::Gcd4);
        out[2] = match (circle_sw_computation(w), classify_circle(w)) {
            (Ok(c), Ok(ty)) => {
                let ty_ok = ty == if expected == 0 { DiffeoType::S3xS2 } else { DiffeoType::S3twistS2 };
                (c.w2 != expected || !ty_ok)
                    .then(|| Mismatch::new(w, format!("class {class}: w2 = {}, type {ty}", c.w2)))
            }
            (Err(e), _) | (_, Err(e)) => Some(Mismatch::new(w, format!("pipeline error: {e}"))),
        };
    }

    let in_gcd4 = class == Admissibility::Gcd4;
    if in_gcd4 {
        let [a, b, _, _] = w.tuple();
        if (a - b) % 2 == 0 {
            out[3] = Some(Mismatch::new(w, "a and b have equal parity"));
        }
        out[4] = match parity_split(w).and_then(|s| u2_lift(&s.weights)) {
            Ok(l) if l.freeness_gcd() == 1 => None,
            Ok(l) => Some(Mismatch::new(w, format!("lift gcd {}", l.freeness_gcd()))),
            Err(e) => Some(Mismatch::new(w, format!("lift failed: {e}"))),
        };
    }

    for mv in CircleMove::ALL {
        let moved = w.apply(mv);
        let v = circle_effectively_free(&moved);
        if !same_verdict(&v, &truth) || admissibility_class(&moved) != class {
            out[5] = Some(Mismatch::new(w, format!("{mv:?} gives {moved}: {}", v.status)));
            break;
        }
    }
    (out, in_dichotomy, in_gcd4)
}

/// All circle suites over [`circle_range`]`(bound)`. With `depth = None`
/// each tuple uses [`circle_oracle_depth`].
pub fn circle_suites(bound: i64, depth: Option<u64>, criterion: CircleCriterion) -> Vec<SuiteOutcome> {
    let tuples = circle_range(bound);
    let results: Vec<_> = tuples.par_iter().map(|w| check_circle(w, depth, criterion)).collect();
    let mut suites: Vec<SuiteOutcome> = CIRCLE_SUITES.iter().map(|n| SuiteOutcome::new(n)).collect();
    for (checks, in_dichotomy, in_gcd4) in results {
        for (i, m) in checks.into_iter().enumerate() {
            let applies = match i {
                2 => in_dichotomy,
                3 | 4 => in_gcd4,
                _ => true,
            };
            if applies {
                suites[i].record(m);
            }
        }
    }
    suites
}

fn check_normalized(n: &NormalizedTorus, depth: Option<u64>) -> Result<Option<Mismatch>> {
    let verdict = torus_free(n)?;
    let w = n.to_weights()?;
    let report = torus_fixed_point_oracle(&w, depth.unwrap_or_else(|| torus_oracle_depth(n)));
    let witness_bad = verdict.witness.as_ref().is_some_and(|wit| !wit.validate_torus(&w));
    if same_verdict(&verdict, &report.verdict) && !witness_bad {
        return Ok(None);
    }
    let mut m = Mismatch::new(
        n,
        format!("{} / {}", subject_verdict("criterion", &verdict), subject_verdict("oracle", &report.verdict)),
    );
    m.witnesses = report.witnesses.into_iter().take(4).collect();
    m.witnesses.extend(verdict.witness);
    Ok(Some(m))
}

/// `torus_free` against the coordinate-point oracle on [`normalized_range`].
pub fn torus_oracle_suite(bound: i64, depth: Option<u64>) -> SuiteOutcome {
    let results: Vec<_> = normalized_range(bound)
        .par_iter()
        .map(|n| check_normalized(n, depth).unwrap_or_else(|e| Some(Mismatch::new(n, e.to_string()))))
        .collect();
    let mut suite = SuiteOutcome::new("torus criterion vs oracle");
    results.into_iter().for_each(|m| suite.record(m));
    suite
}

/// Effective freeness and type of `w` are unchanged by `mv`. Status and
/// kernel order are compared only when the moved matrix needed no row
/// reduction, since dividing out a row content passes to a quotient torus.
pub fn torus_symmetry_check(w: &TorusWeights, mv: SymmetryMove) -> Option<Mismatch> {
    let moved = match w.apply(mv) {
        Ok(m) => m,
        Err(e) => return Some(Mismatch::new(w, format!("{mv:?} failed: {e}"))),
    };
    let (before, after) = match (torus_weights_free(w), torus_weights_free(&moved)) {
        (Ok(x), Ok(y)) => (x.verdict, y.verdict),
        (Err(e), _) | (_, Err(e)) => return Some(Mismatch::new(w, format!("{mv:?}: {e}"))),
    };
    let kernel_comparable = moved.is_reduced_input();
    let degenerate = |v: &FreenessVerdict| v.status == Status::Degenerate;
    if before.is_effectively_free() != after.is_effectively_free()
        || degenerate(&before) != degenerate(&after)
        || (kernel_comparable && !same_verdict(&before, &after))
    {
        return Some(Mismatch::new(
            w,
            format!("{mv:?} gives {moved}: {} -> {}", subject_verdict("before", &before), subject_verdict("after", &after)),
        ));
    }
    if before.is_effectively_free() {
        match (classify_torus(w), classify_torus(&moved)) {
            (Ok(x), Ok(y)) if x == y => {}
            (x, y) => return Some(Mismatch::new(w, format!("{mv:?} gives {moved}: {x:?} -> {y:?}"))),
        }
    }
    None
}

/// [`torus_symmetry_check`] for every matrix of [`torus_range`] and every
/// [`standard_moves`] entry.
pub fn torus_symmetry_suite(bound: i64) -> SuiteOutcome {
    let moves = standard_moves();
    let results: Vec<Vec<Option<Mismatch>>> = torus_range(bound)
        .par_iter()
        .map(|w| moves.iter().map(|&mv| torus_symmetry_check(w, mv)).collect())
        .collect();
    let mut suite = SuiteOutcome::new("torus symmetry invariance");
    results.into_iter().flatten().for_each(|m| suite.record(m));
    suite
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    /// Entry bound for circle tuples.
    pub bound: i64,
    /// Entry bound for normalized torus tuples.
    pub torus_bound: i64,
    /// Entry bound for raw matrices in the symmetry suite.
    pub symmetry_bound: i64,
    pub oracle_depth: Option<u64>,
    pub circle_criterion: CircleCriterion,
}

impl VerifyConfig {
    pub fn new(bound: i64, oracle_depth: Option<u64>) -> Self {
        VerifyConfig {
            bound,
            torus_bound: bound.min(8),
            symmetry_bound: bound.min(1),
            oracle_depth,
            circle_criterion: circle_effectively_free,
        }
    }
}

pub fn run_all(config: &VerifyConfig) -> Vec<SuiteOutcome> {
    let mut suites = circle_suites(config.bound, config.oracle_depth, config.circle_criterion);
    suites.push(torus_oracle_suite(config.torus_bound, config.oracle_depth));
    suites.push(torus_symmetry_suite(config.symmetry_bound));
    suites
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(circle_range(0).len(), 0);
        // 80 nonzero tuples in [−1,1]⁴, all reduced
        assert_eq!(circle_range(1).len(), 80);
        assert_eq!(normalized_range(1).len(), 2 * 2 * 3 * 2);
        assert_eq!(torus_range(1).len(), 6560);
    }

    #[test]
    fn small_sweep_passes() {
        let suites = run_all(&VerifyConfig::new(2, None));
        for s in &suites {
            assert!(s.passed(), "{}: {:?}", s.name, s.mismatches);
            assert!(s.checked > 0, "{} checked nothing", s.name);
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let mut config = VerifyConfig::new(1, None);
        config.circle_criterion = sign_flipped_criterion;
        let suites = circle_suites(config.bound, None, config.circle_criterion);
        assert!(!suites[0].passed());
        assert!(!suites[0].mismatches[0].witnesses.is_empty());
    }

    #[test]
    fn deterministic_order() {
        let a = circle_suites(2, Some(8), circle_effectively_free);
        let b = circle_suites(2, Some(8), circle_effectively_free);
        assert_eq!(a, b);
    }
}
