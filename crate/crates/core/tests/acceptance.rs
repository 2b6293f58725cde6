//! Acceptance criteria, one line per criterion. Exits nonzero on any failure.

use std::process::ExitCode;
use std::time::Instant;

use biquotient::actions::{CircleMove, CircleWeights, SphereCoord, SymmetryMove, TorusCoord, TorusWeights, Unimodular};
use biquotient::classify::{catalog_lookup, classify_circle, classify_torus, CatalogEntry, DiffeoType};
use biquotient::freeness::circle_effectively_free;
use biquotient::lattice::NormalizedTorus;
use biquotient::sweep::{circle_suites, torus_oracle_suite, torus_symmetry_check, SuiteOutcome};
use biquotient::swclass::{GF2Poly, Gf2Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Line {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn from_suite(name: &'static str, s: &SuiteOutcome, secs: f64) -> Line {
    let mut detail = format!("{} checked, {} mismatches, {secs:.1}s", s.checked, s.mismatch_count);
    if let Some(m) = s.mismatches.first() {
        detail.push_str(&format!("; first: {} {}", m.subject, m.detail));
    }
    Line { name, ok: s.passed() && s.checked > 0, detail }
}

fn torus_table() -> Line {
    let mut failures = Vec::new();
    let mut check = |t: [i64; 4], expected: DiffeoType| {
        let w = NormalizedTorus::new(t[0], t[1], t[2], t[3]).and_then(|n| n.to_weights()).unwrap();
        match classify_torus(&w) {
            Ok(ty) if ty == expected => {}
            other => failures.push(format!("{t:?}: {other:?}")),
        }
    };
    for beta in 0..=8 {
        let expected = if beta % 2 == 0 { DiffeoType::S2xS2 } else { DiffeoType::Cp2MinusCp2 };
        check([1, beta, 0, 1], expected);
    }
    check([1, 1, 2, 1], DiffeoType::Cp2PlusCp2);
    Line { name: "torus classification table", ok: failures.is_empty(), detail: format!("10 cases; {failures:?}") }
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> Unimodular {
    let mut m = [[1i64, 0], [0, 1]];
    for _ in 0..rng.gen_range(1..4) {
        let k = rng.gen_range(-2..=2);
        let e = if rng.gen_bool(0.5) { [[1, k], [0, 1]] } else { [[1, 0], [k, 1]] };
        m = [
            [m[0][0] * e[0][0] + m[0][1] * e[1][0], m[0][0] * e[0][1] + m[0][1] * e[1][1]],
            [m[1][0] * e[0][0] + m[1][1] * e[1][0], m[1][0] * e[0][1] + m[1][1] * e[1][1]],
        ];
    }
    if rng.gen_bool(0.5) {
        m = [m[1], m[0]];
    }
    Unimodular::new(m).unwrap()
}

fn random_move(rng: &mut ChaCha8Rng) -> SymmetryMove {
    match rng.gen_range(0..5) {
        0 => SymmetryMove::ConjugateTorus(if rng.gen_bool(0.5) { TorusCoord::Z } else { TorusCoord::W }),
        1 => SymmetryMove::ConjugateSphere(SphereCoord::ALL[rng.gen_range(0..4)]),
        2 => SymmetryMove::SwapTorus,
        3 => SymmetryMove::SwapSphereFactors,
        _ => SymmetryMove::Reparametrize(random_unimodular(rng)),
    }
}

/// Half raw random matrices, half scrambled normalized forms (mostly free).
fn random_torus(rng: &mut ChaCha8Rng) -> TorusWeights {
    loop {
        let w = if rng.gen_bool(0.5) {
            let m: [[i64; 4]; 2] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-3..=3)));
            TorusWeights::new(m)
        } else {
            let n = NormalizedTorus::new(1, rng.gen_range(0..=6), rng.gen_range(-3..=3), 1).unwrap();
            n.to_weights().and_then(|w| w.apply(SymmetryMove::Reparametrize(random_unimodular(rng))))
        };
        if let Ok(w) = w {
            return w;
        }
    }
}

fn symmetry_invariance() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut failures = Vec::new();
    let mut free = 0;
    for _ in 0..1000 {
        let w = random_torus(&mut rng);
        let mv = random_move(&mut rng);
        if classify_torus(&w).is_ok() {
            free += 1;
        }
        if let Some(m) = torus_symmetry_check(&w, mv) {
            failures.push(format!("{} {}", m.subject, m.detail));
        }
    }
    let mut circle_free = 0;
    for _ in 0..1000 {
        let w = loop {
            let t: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-12..=12));
            if let Ok(w) = CircleWeights::new(t) {
                break w;
            }
        };
        let mv = CircleMove::ALL[rng.gen_range(0..CircleMove::ALL.len())];
        let moved = w.apply(mv);
        let (v, u) = (circle_effectively_free(&w), circle_effectively_free(&moved));
        let same_type = match (classify_circle(&w), classify_circle(&moved)) {
            (Ok(x), Ok(y)) => x == y,
            (Err(_), Err(_)) => true,
            _ => false,
        };
        if v.is_effectively_free() {
            circle_free += 1;
        }
        if v.status != u.status || v.kernel_order != u.kernel_order || !same_type {
            failures.push(format!("{w} {mv:?}"));
        }
    }
    Line {
        name: "symmetry invariance",
        ok: failures.is_empty(),
        detail: format!(
            "1000 torus pairs ({free} effectively free) + 1000 circle pairs ({circle_free} effectively free), \
             {} exceptions {:?}",
            failures.len(),
            failures.iter().take(3).collect::<Vec<_>>()
        ),
    }
}

/// Rows as typeset, cell by cell.
const TABLE_4: [[&str; 4]; 10] = [
    [r"$S^4$", r"$Sp(2)$", r"$Sp(1)^2$", r"$Sp(1)\times \Delta Sp(1)$"],
    [r"$S^4$", r"$SU(4)$", r"$SU(3)\times SU(2)$", r"$SU(3)\times \Delta SU(2)$"],
    [r"$S^4$", r"$Spin(8)$", r"$Spin(7)\times SU(2)$", r"$Spin(7)\times \Delta SU(2)$"],
    [r"$S^4$", r"$Spin(8)$", r"$Spin(7)\times SU(2)$", r"$\overline{Spin(7)}\times \overline{SU(2)}$"],
    [r"$S^4$", r"$Spin(7)$", r"$G_2\times SU(2)$", r"$G_2\times \overline{SU(2)}$"],
    [r"$\mathbb{C}P^2$", r"$SU(3)$", r"$SU(2)\times S^1$", r"$\diag(zA,\overline{z}^2)\times \diag(z^4, z^4, \overline{z}^8)$"],
    [r"$\mathbb{C}P^2$", r"$SU(4)$", r"$Sp(2) \times S^1$", r"$Sp(2)\times \diag(z,z,z,\overline{z}^3)$"],
    [r"$S^2\times S^2$", r"$Sp(1)^2$", r"$T^2$", r"$(z^2, wz^n)\times(1,z^n)$ $n$ even"],
    [r"$\mathbb{C}P^2\sharp -\mathbb{C}P^2$", r"$Sp(1)^2$", r"$T^2$", r"$(z^2, wz^n)\times (1,z^n)$ $n$ odd"],
    [r"$\mathbb{C}P^2\sharp \mathbb{C}P^2$", r"$Sp(1)^2$", r"$T^2$", r"$(zw,zw^2)\times(w,z)$"],
];
const TABLE_5: [[&str; 4]; 2] = [
    [r"$S^3\times S^2$", r"$Sp(1)^2$", r"$S^1$", r"$\diag(z^a, z^b)\times \diag(z^c, z^d)_1$"],
    [r"$S^3\,\hat{\times}\,S^2$", r"$Sp(1)^2$", r"$S^1$", r"$\diag(z^a,z^b)\times \diag(z^c,z^d)_2$"],
];
const TAGS_4: [DiffeoType; 10] = [
    DiffeoType::S4,
    DiffeoType::S4,
    DiffeoType::S4,
    DiffeoType::S4,
    DiffeoType::S4,
    DiffeoType::CP2,
    DiffeoType::CP2,
    DiffeoType::S2xS2,
    DiffeoType::Cp2MinusCp2,
    DiffeoType::Cp2PlusCp2,
];

fn rows_match(entries: &[CatalogEntry], rows: &[[&str; 4]], tags: &[DiffeoType]) -> bool {
    entries.len() == rows.len()
        && entries.iter().zip(rows).zip(tags).all(|((e, r), &t)| {
            e.manifold == t
                && [&e.latex.manifold, &e.latex.group_g, &e.latex.group_h, &e.latex.embedding]
                    .iter()
                    .zip(r)
                    .all(|(a, b)| a.as_str() == *b)
        })
}

fn catalog_fidelity() -> Line {
    let four = catalog_lookup(4, None).unwrap();
    let five = catalog_lookup(5, None).unwrap();
    let ok4 = rows_match(&four, &TABLE_4, &TAGS_4);
    let ok5 = rows_match(&five, &TABLE_5, &[DiffeoType::S3xS2, DiffeoType::S3twistS2])
        && five.iter().map(|e| e.subscript).eq([Some(1), Some(2)]);
    Line {
        name: "catalog fidelity",
        ok: ok4 && ok5,
        detail: format!("{} rows in dimension 4 (match {ok4}), {} in dimension 5 (match {ok5})", four.len(), five.len()),
    }
}

fn random_poly(rng: &mut ChaCha8Rng, ring: &Gf2Ring) -> GF2Poly {
    (0..rng.gen_range(0..7)).fold(ring.zero(), |acc, _| {
        let m: Vec<u32> = (0..ring.rank()).map(|_| rng.gen_range(0..3)).collect();
        &acc + &ring.monomial(m)
    })
}

fn gf2_suite() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let rings = [
        Gf2Ring::new(["λ1", "λ2", "μ1", "μ2"], 2),
        Gf2Ring::new(["x", "y", "z"], 4),
        Gf2Ring::new(["w"], 6),
    ];
    let mut failures = 0;
    let n = 10_000;
    for i in 0..n {
        let ring = &rings[i % rings.len()];
        let (p, q, r) = (random_poly(&mut rng, ring), random_poly(&mut rng, ring), random_poly(&mut rng, ring));
        let k = rng.gen_range(0..=ring.degree_bound());
        let ok = match i % 4 {
            0 => &(&p * &q) * &r == &p * &(&q * &r),
            1 => &p * &q == &q * &p,
            2 => &(&p + &q) * &(&p + &q) == &(&p * &p) + &(&q * &q),
            _ => p.truncated(k).truncated(k) == p.truncated(k),
        };
        if !ok {
            failures += 1;
        }
    }
    Line { name: "GF(2) ring properties", ok: failures == 0, detail: format!("{n} checks, {failures} failures") }
}

fn main() -> ExitCode {
    let mut lines = Vec::new();

    let t = Instant::now();
    let circle = circle_suites(12, None, circle_effectively_free);
    let secs = t.elapsed().as_secs_f64();
    lines.push(from_suite("circle criterion vs oracle", &circle[0], secs));

    let t = Instant::now();
    let torus = torus_oracle_suite(8, None);
    lines.push(from_suite("torus criterion vs oracle", &torus, t.elapsed().as_secs_f64()));

    lines.push(from_suite("w2 dichotomy", &circle[2], secs));
    lines.push(from_suite("four-gcd pattern equivalence", &circle[1], secs));
    lines.push(from_suite("opposite parity in the gcd4 class", &circle[3], secs));
    lines.push(torus_table());
    lines.push(symmetry_invariance());
    lines.push(catalog_fidelity());
    lines.push(from_suite("lift soundness", &circle[4], secs));
    lines.push(gf2_suite());

    let mut failed = 0;
    for l in &lines {
        println!("{} {}: {}", if l.ok { "PASS" } else { "FAIL" }, l.name, l.detail);
        failed += usize::from(!l.ok);
    }
    println!("{} of {} criteria passed", lines.len() - failed, lines.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
