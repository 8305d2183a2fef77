//! The acceptance suite, runnable from the library, the command line and
//! the integration tests. Every criterion is deterministic given the seed.

use std::time::{Duration, Instant};

use itertools::Itertools;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{gen_corpus, named, CorpusSpec};
use crate::curves::{
    boundary_loops, boundary_segments, dehn_twist, graded, random_arc, random_band, tau_translate,
    CurveWord, GradedCurve,
};
use crate::homalg::{mapping_cone, stalk_probes, Oracle};
use crate::objects::{curve_complex, string_complex, ProjComplex};
use crate::presentation::{threads, validate_gentle, GentlePresentation, Violation};
use crate::surface::{
    build_disc_model, decide_derived_equivalence, decide_with_witness, ribbon_surface, trace_boundary,
    boundary_winding, Verdict,
};
use crate::tilting::roundtrip_check;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub budget_ms: Option<u128>,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:>2} {}: {} ({} ms{})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed_ms,
            self.budget_ms.map(|b| format!(", budget {b} ms")).unwrap_or_default()
        )
    }
}

pub const CRITERIA: [(&str, Option<u64>); 10] = [
    ("gentle validation", Some(1_000)),
    ("surface golden values", Some(1_000)),
    ("marked points, punctures and Euler characteristic", Some(10_000)),
    ("fractional Calabi-Yau law", Some(60_000)),
    ("combinatorial basis against the oracle", Some(60_000)),
    ("cones against resolutions", None),
    ("endomorphism round trip", Some(30_000)),
    ("derived equivalence decisions", None),
    ("spherical twist against Dehn twist", None),
    ("Auslander-Reiten check", None),
];

/// Named algebras followed by fifty seeded random ones.
pub fn corpus(seed: u64) -> Vec<(String, GentlePresentation)> {
    let mut out = named::all();
    let spec = CorpusSpec {
        seed,
        ..CorpusSpec::default()
    };
    out.extend(
        gen_corpus(&spec)
            .into_iter()
            .enumerate()
            .map(|(i, p)| (format!("corpus_{i}"), p)),
    );
    out
}

type Check = Result<String, String>;

pub fn run_criterion(id: usize, seed: u64) -> CriterionResult {
    let (name, budget) = CRITERIA[id - 1];
    let start = Instant::now();
    let outcome = match id {
        1 => gentle_validation(seed),
        2 => surface_golden(),
        3 => aag_consistency(seed),
        4 => fractional_cy(seed),
        5 => oracle_agreement(seed),
        6 => cone_resolution(seed),
        7 => endo_roundtrip(seed),
        8 => equivalence_decisions(seed),
        9 => twist_agreement(),
        10 => ar_checks(),
        _ => Err(format!("no criterion {id}")),
    };
    let elapsed = start.elapsed();
    let in_time = budget.is_none_or(|b| elapsed <= Duration::from_millis(b));
    let (passed, mut detail) = match outcome {
        Ok(d) => (in_time, d),
        Err(d) => (false, d),
    };
    if !in_time {
        detail.push_str("; over time budget");
    }
    CriterionResult {
        id,
        name: name.to_string(),
        passed,
        detail,
        elapsed_ms: elapsed.as_millis(),
        budget_ms: budget.map(u128::from),
    }
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    (1..=CRITERIA.len()).map(|id| run_criterion(id, seed)).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gentle_validation(seed: u64) -> Check {
    let mut named_ok = vec![named::kronecker(), named::a2(), named::dual_numbers()];
    named_ok.extend(named::a3_orientations());
    for p in &named_ok {
        let r = validate_gentle(p);
        ensure(r.is_ok(), || format!("rejected {}: {:?}", p.emit(), r.violations))?;
    }
    let spec = CorpusSpec {
        count: 50,
        max_vertices: 8,
        seed,
        ..CorpusSpec::default()
    };
    let corpus = gen_corpus(&spec);
    ensure(corpus.len() == 50, || "corpus short".into())?;
    for p in &corpus {
        ensure(p.num_vertices() <= 8, || "corpus algebra too large".into())?;
        let r = validate_gentle(p);
        ensure(r.is_ok(), || format!("corpus algebra rejected: {:?}", r.violations))?;
    }
    let bad = validate_gentle(&named::free_loop());
    ensure(
        bad.violations
            .iter()
            .any(|v| matches!(v, Violation::NotAdmissible { .. })),
        || "free loop passed admissibility".into(),
    )?;
    Ok(format!("{} named and {} random algebras valid, free loop rejected", named_ok.len(), corpus.len()))
}

fn surface_golden() -> Check {
    let k = ribbon_surface(&named::kronecker()).map_err(|e| e.to_string())?;
    let comps: Vec<(usize, i64)> = k.boundary.iter().map(|b| (b.marked_count, b.winding)).collect();
    ensure(
        k.euler_characteristic == 0 && k.genus == 0 && k.boundary.len() == 2 && comps == [(1, 0), (1, 0)],
        || format!("kronecker surface {k:?}"),
    )?;
    let mut count = 0;
    for n in 1..=4usize {
        for o in (0..n - 1).map(|_| ['>', '<']).multi_cartesian_product() {
            let word: String = o.into_iter().collect();
            let s = ribbon_surface(&named::linear_a(&word)).map_err(|e| e.to_string())?;
            ensure(
                s.boundary.len() == 1 && s.boundary[0].marked_count == n + 1,
                || format!("A{n} {word}: {s:?}"),
            )?;
            count += 1;
        }
    }
    let d = ribbon_surface(&named::dual_numbers()).map_err(|e| e.to_string())?;
    ensure(
        d.boundary.iter().filter(|b| b.marked_count == 0).count() == 1,
        || format!("dual numbers {d:?}"),
    )?;
    Ok(format!("kronecker, {count} type A orientations and dual numbers match"))
}

fn aag_consistency(seed: u64) -> Check {
    let corpus = corpus(seed);
    for (name, p) in &corpus {
        let s = ribbon_surface(p).map_err(|e| format!("{name}: {e}"))?;
        let t = threads(p);
        let marked: usize = s.boundary.iter().map(|b| b.marked_count).sum();
        ensure(marked == t.permitted.len(), || {
            format!("{name}: {marked} marked points, {} permitted threads", t.permitted.len())
        })?;
        let unmarked = s.boundary.iter().filter(|b| b.marked_count == 0).count();
        ensure(unmarked == t.full_relation_cycles.len(), || {
            format!("{name}: {unmarked} unmarked components, {} full relation cycles", t.full_relation_cycles.len())
        })?;
        let comps = p.quiver.components().len() as i64;
        let chi = p.num_vertices() as i64 - p.num_arrows() as i64;
        ensure(
            s.euler_characteristic == chi
                && chi == 2 * comps - 2 * s.genus as i64 - s.boundary.len() as i64,
            || format!("{name}: chi {chi}, genus {}, {} boundary components", s.genus, s.boundary.len()),
        )?;
    }
    Ok(format!("{} algebras consistent", corpus.len()))
}

fn fractional_cy(seed: u64) -> Check {
    let corpus = corpus(seed);
    let mut segments = 0;
    for (name, p) in &corpus {
        let m = build_disc_model(p).map_err(|e| e.to_string())?;
        let walks = trace_boundary(&m).map_err(|e| e.to_string())?;
        let o = Oracle::new(p);
        for (d, seg) in boundary_segments(&m).into_iter().enumerate() {
            let walk = walks
                .iter()
                .find(|w| w.pieces.contains(&(d, 0)))
                .ok_or_else(|| format!("{name}: marked point {d} on no walk"))?;
            let omega = boundary_winding(&m, walk);
            let g = graded(&m, seg, 0).map_err(|e| e.to_string())?;
            let mut cur = g.clone();
            for _ in 0..walk.marked {
                cur = tau_translate(&m, &cur).map_err(|e| e.to_string())?;
            }
            ensure(cur.word.canonical(&m) == g.word.canonical(&m), || {
                format!("{name}: segment {d} not fixed by tau^{}", walk.marked)
            })?;
            let x = string_complex(p, &m, &g).map_err(|e| e.to_string())?;
            let y = string_complex(p, &m, &cur).map_err(|e| e.to_string())?;
            ensure(o.same_fingerprint(&y, &x.shift(-omega), 0), || {
                format!("{name}: segment {d} translate is not the shift by {}", -omega)
            })?;
            segments += 1;
        }
    }
    Ok(format!("{segments} boundary segments satisfy the law"))
}

/// A random graded string or band with its parameter.
fn random_object(
    rng: &mut ChaCha8Rng,
    p: &GentlePresentation,
    m: &crate::surface::DiscModel,
    max_len: usize,
) -> (GradedCurve, Rational64, ProjComplex) {
    if rng.gen_bool(0.35) {
        if let Some(b) = random_band(rng, m, max_len, 40) {
            let g = graded(m, b, 0).expect("bands are drawn gradable");
            let lambda = Rational64::from_integer(rng.gen_range(1..=3));
            let x = curve_complex(p, m, &g, lambda).expect("valid band");
            return (g, lambda, x);
        }
    }
    let g = graded(m, random_arc(rng, m, max_len), 0).expect("arcs are gradable");
    let x = string_complex(p, m, &g).expect("valid arc");
    (g, Rational64::from_integer(1), x)
}

fn oracle_agreement(seed: u64) -> Check {
    let corpus = corpus(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x05);
    let pairs = 240;
    for i in 0..pairs {
        let (name, p) = &corpus[i % corpus.len()];
        let m = build_disc_model(p).map_err(|e| e.to_string())?;
        let o = Oracle::new(p);
        let (a, _, x) = random_object(&mut rng, p, &m, 6);
        let (b, _, y) = random_object(&mut rng, p, &m, 6);
        let prof = o.hom_profile(&x, &y);
        for (d, maps) in o.alp_basis_all(&x, &y) {
            ensure(maps.len() == prof.get(d), || {
                format!(
                    "{name}: {:?} vs {:?} degree {d}: {} basis maps, dimension {}",
                    a.word.exits,
                    b.word.exits,
                    maps.len(),
                    prof.get(d)
                )
            })?;
            ensure(maps.iter().all(|f| o.is_chain_map(f) && !o.is_null_homotopic(f)), || {
                format!("{name}: basis map is not a nonzero morphism")
            })?;
        }
        let total: usize = o.alp_basis_all(&x, &y).values().map(Vec::len).sum();
        ensure(total == prof.total(), || format!("{name}: basis misses degrees"))?;
    }
    Ok(format!("{pairs} random pairs agree degree by degree"))
}

fn cone_resolution(seed: u64) -> Check {
    let corpus = corpus(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x06);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 60 && attempts < 20_000 {
        attempts += 1;
        let (name, p) = &corpus[attempts % corpus.len()];
        let m = build_disc_model(p).map_err(|e| e.to_string())?;
        let a = graded(&m, random_arc(&mut rng, &m, 4), 0).expect("arc");
        let b = random_arc(&mut rng, &m, 4);
        let ends = |w: &CurveWord| [w.start_disc(), w.end_disc(&m)];
        let Some(&disc) = ends(&a.word).iter().find(|d| ends(&b).contains(d)) else {
            continue;
        };
        let a = if a.word.start_disc() == disc { a.clone() } else { a.reversed(&m) };
        let b = graded(&m, if b.start_disc() == disc { b.clone() } else { b.reversed(&m) }, 0)
            .expect("arc");
        let b = b.shifted(a.grading.degrees[0] - b.grading.degrees[0]);
        if a.word.exits[0].pos == b.word.exits[0].pos {
            continue;
        }
        let o = Oracle::new(p);
        let (f, resolved) = o
            .intersection_morphism(&m, &a, &b, disc)
            .map_err(|e| format!("{name}: {e}"))?;
        let cone = mapping_cone(&f).map_err(|e| e.to_string())?;
        let z = string_complex(p, &m, &resolved).map_err(|e| e.to_string())?;
        ensure(o.same_fingerprint(&cone, &z, 0), || {
            format!("{name}: cone of {:?} -> {:?} differs from {:?}", a.word.exits, b.word.exits, resolved.word.exits)
        })?;
        checked += 1;
    }
    ensure(checked >= 50, || format!("only {checked} crossings found"))?;
    Ok(format!("{checked} marked point crossings agree"))
}

fn endo_roundtrip(seed: u64) -> Check {
    let corpus = corpus(seed);
    for (name, p) in &corpus {
        let r = roundtrip_check(p);
        ensure(r.ok, || format!("{name}: {}", r.message))?;
    }
    Ok(format!("{} algebras recovered", corpus.len()))
}

fn equivalence_decisions(seed: u64) -> Check {
    let a3 = named::a3_orientations();
    for (x, y) in a3.iter().cartesian_product(&a3) {
        let v = decide_derived_equivalence(x, y).map_err(|e| e.to_string())?;
        ensure(v == Verdict::Equivalent, || format!("A3 orientations gave {v}"))?;
    }
    let v = decide_derived_equivalence(&named::a2(), &named::dual_numbers()).map_err(|e| e.to_string())?;
    ensure(v == Verdict::NotEquivalent, || format!("A2 against dual numbers gave {v}"))?;
    let corpus = corpus(seed);
    let mut verdicts = 0;
    for (i, (na, p)) in corpus.iter().enumerate() {
        let (v, _) = decide_with_witness(p, p).map_err(|e| e.to_string())?;
        ensure(v == Verdict::Equivalent, || format!("{na} not equivalent to itself"))?;
        for (nb, q) in corpus.iter().skip(i + 1) {
            let (v1, w1) = decide_with_witness(p, q).map_err(|e| e.to_string())?;
            let (v2, w2) = decide_with_witness(q, p).map_err(|e| e.to_string())?;
            ensure(v1 == v2, || format!("{na}, {nb}: {v1} one way, {v2} the other"))?;
            if v1 == Verdict::NotEquivalent {
                ensure(w1.is_some() && w2.is_some(), || format!("{na}, {nb}: no witness"))?;
            }
            verdicts += 2;
        }
    }
    Ok(format!("A3 orientations equivalent, A2 and dual numbers not, {verdicts} corpus verdicts symmetric"))
}

fn twist_agreement() -> Check {
    let p = named::kronecker();
    let m = build_disc_model(&p).map_err(|e| e.to_string())?;
    let o = Oracle::new(&p);
    let band = boundary_loops(&m)
        .into_iter()
        .next()
        .ok_or("kronecker has no band")?
        .1;
    let gb = graded(&m, band.clone(), 0).map_err(|e| e.to_string())?;
    let b1 = curve_complex(&p, &m, &gb, Rational64::from_integer(1)).map_err(|e| e.to_string())?;
    let mut probes = stalk_probes(&p, 2);
    probes.push(b1.clone());
    for v in 0..p.num_vertices() {
        let y = ProjComplex::stalk(v, 0);
        let algebraic = o.spherical_twist(&b1, &y, &probes).map_err(|e| e.to_string())?;
        let arc = graded(&m, CurveWord::dual_arc(&m, v), 0).map_err(|e| e.to_string())?;
        let twisted = dehn_twist(&m, &arc, &band).map_err(|e| e.to_string())?;
        let geometric = string_complex(&p, &m, &twisted).map_err(|e| e.to_string())?;
        ensure(o.same_fingerprint(&algebraic, &geometric, 2), || {
            format!("P_{} twists to {:?}", p.vertex_name(v), twisted.word.exits)
        })?;
    }
    Ok("both projectives agree".into())
}

fn ar_checks() -> Check {
    let mut algebras = vec![("a2".to_string(), named::a2()), ("kronecker".to_string(), named::kronecker())];
    algebras.extend(
        named::a3_orientations()
            .into_iter()
            .enumerate()
            .map(|(i, p)| (format!("a3_{i}"), p)),
    );
    let mut count = 0;
    for (name, p) in &algebras {
        let m = build_disc_model(p).map_err(|e| e.to_string())?;
        let o = Oracle::new(p);
        for seg in boundary_segments(&m) {
            let g = graded(&m, seg, 0).map_err(|e| e.to_string())?;
            let r = o.ar_check(&m, &g).map_err(|e| e.to_string())?;
            ensure(r.ok, || format!("{name} {:?}: {}", g.word.exits, r.failures.join("; ")))?;
            count += 1;
        }
    }
    Ok(format!("{count} boundary segments pass"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_carry_the_verdict() {
        let r = run_criterion(2, 0);
        assert!(r.passed);
        assert!(r.line().starts_with("PASS criterion  2 surface golden values"));
        let failed = CriterionResult { passed: false, ..r };
        assert!(failed.line().starts_with("FAIL"));
    }

    #[test]
    fn corpus_is_named_then_seeded() {
        let c = corpus(1);
        assert_eq!(c.len(), named::all().len() + 50);
        assert_eq!(c, corpus(1));
        assert_ne!(c, corpus(2));
    }
}
