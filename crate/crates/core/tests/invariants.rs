//! Structural invariants over seeded random algebras and curves.

use gentle::corpus::{gen_corpus, CorpusSpec};
use gentle::curves::{random_arc, tau_translate, tau_translate_dir, SlideDirection};
use gentle::homalg::{mapping_cone, Oracle};
use gentle::objects::{identify_string, minimize, string_complex};
use gentle::presentation::threads;
use gentle::surface::{decide_derived_equivalence, ribbon_surface, Verdict};
use gentle::{build_disc_model, derived_invariant, graded, ChainMap, DiscModel, GentlePresentation, GradedCurve};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn algebra(seed: u64) -> GentlePresentation {
    let spec = CorpusSpec {
        count: 1,
        max_vertices: 6,
        max_arrows: 8,
        seed,
    };
    gen_corpus(&spec).remove(0)
}

fn arcs(seed: u64, count: usize) -> (GentlePresentation, DiscModel, Vec<GradedCurve>) {
    let p = algebra(seed);
    let m = build_disc_model(&p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let out = (0..count)
        .map(|_| graded(&m, random_arc(&mut rng, &m, 6), 0).unwrap())
        .collect();
    (p, m, out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn invariant_ignores_labels(seed in any::<u64>()) {
        let p = algebra(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vs: Vec<usize> = (0..p.num_vertices()).collect();
        let mut arrows: Vec<usize> = (0..p.num_arrows()).collect();
        vs.shuffle(&mut rng);
        arrows.shuffle(&mut rng);
        let q = p.relabel(&vs, &arrows, "r");
        prop_assert_eq!(derived_invariant(&p).unwrap(), derived_invariant(&q).unwrap());
        prop_assert_eq!(decide_derived_equivalence(&p, &q).unwrap(), Verdict::Equivalent);
    }

    #[test]
    fn surface_counts_agree(seed in any::<u64>()) {
        let p = algebra(seed);
        let s = ribbon_surface(&p).unwrap();
        let th = threads(&p);
        let marked: usize = s.boundary.iter().map(|b| b.marked_count).sum();
        prop_assert_eq!(marked, th.permitted.len());
        prop_assert_eq!(s.boundary.iter().filter(|b| b.marked_count == 0).count(), th.full_relation_cycles.len());
        prop_assert_eq!(s.euler_characteristic, 2 - 2 * s.genus as i64 - s.boundary.len() as i64);
        let winding: i64 = s.boundary.iter().map(|b| b.winding + 2).sum();
        prop_assert_eq!(winding, 4 - 4 * s.genus as i64);
    }

    #[test]
    fn decide_is_symmetric(a in any::<u64>(), b in any::<u64>()) {
        let (p, q) = (algebra(a), algebra(b));
        prop_assert_eq!(
            decide_derived_equivalence(&p, &q).unwrap(),
            decide_derived_equivalence(&q, &p).unwrap()
        );
    }

    #[test]
    fn canonical_is_idempotent(seed in any::<u64>()) {
        let (_, m, xs) = arcs(seed, 3);
        for g in xs {
            let c = g.canonical(&m);
            prop_assert_eq!(c.canonical(&m), c.clone());
            prop_assert_eq!(g.reversed(&m).canonical(&m), c);
        }
    }

    #[test]
    fn shifting_the_grading_shifts_the_complex(seed in any::<u64>(), n in -3i64..=3) {
        let (p, m, xs) = arcs(seed, 2);
        let o = Oracle::new(&p);
        for g in xs {
            let x = string_complex(&p, &m, &g).unwrap();
            let y = string_complex(&p, &m, &g.shifted(n)).unwrap();
            prop_assert!(o.is_isomorphic(&y, &x.shift(-n)));
        }
    }

    #[test]
    fn identify_inverts_string_complex(seed in any::<u64>()) {
        let (p, m, xs) = arcs(seed, 3);
        for g in xs {
            let x = string_complex(&p, &m, &g).unwrap();
            let back = identify_string(&p, &m, &x).expect("string complex is recognised");
            prop_assert_eq!(back.canonical(&m), g.canonical(&m));
        }
    }

    #[test]
    fn translate_commutes_with_reversal(seed in any::<u64>()) {
        let (_, m, xs) = arcs(seed, 3);
        for g in xs {
            let a = tau_translate(&m, &g.reversed(&m)).unwrap();
            let b = tau_translate(&m, &g).unwrap();
            prop_assert_eq!(a.canonical(&m), b.canonical(&m));
        }
    }

    #[test]
    fn inverse_translate_undoes_translate(seed in any::<u64>()) {
        let (_, m, xs) = arcs(seed, 3);
        for g in xs {
            let t = tau_translate(&m, &g).unwrap();
            let back = tau_translate_dir(&m, &t, SlideDirection::Forward).unwrap();
            prop_assert_eq!(back.canonical(&m), g.canonical(&m));
        }
    }

    #[test]
    fn minimize_preserves_the_object(seed in any::<u64>()) {
        let (p, m, xs) = arcs(seed, 2);
        let o = Oracle::new(&p);
        let x = string_complex(&p, &m, &xs[0]).unwrap();
        let noise = mapping_cone(&ChainMap::identity(&string_complex(&p, &m, &xs[1]).unwrap())).unwrap();
        let padded = x.direct_sum(&noise);
        let small = minimize(&p, &padded);
        prop_assert_eq!(small.terms.len(), x.terms.len());
        prop_assert!(o.is_isomorphic(&small, &x));
        prop_assert_eq!(o.hom_profile(&small, &small), o.hom_profile(&x, &x));
    }

    #[test]
    fn composites_of_basis_maps_are_chain_maps(seed in any::<u64>()) {
        let (p, m, xs) = arcs(seed, 3);
        let o = Oracle::new(&p);
        let cs: Vec<_> = xs.iter().map(|g| string_complex(&p, &m, g).unwrap()).collect();
        for (d1, fs) in o.alp_basis_all(&cs[0], &cs[1]) {
            for (d2, gs) in o.alp_basis_all(&cs[1], &cs[2]) {
                for f in &fs {
                    for g in &gs {
                        let h = o.compose(g, f).unwrap();
                        prop_assert_eq!(h.degree, d1 + d2);
                        prop_assert!(o.is_chain_map(&h));
                    }
                }
            }
        }
    }

    #[test]
    fn basis_matches_oracle(seed in any::<u64>()) {
        let (p, m, xs) = arcs(seed, 2);
        let o = Oracle::new(&p);
        let x = string_complex(&p, &m, &xs[0]).unwrap();
        let y = string_complex(&p, &m, &xs[1]).unwrap();
        let prof = o.hom_profile(&x, &y);
        let basis = o.alp_basis_all(&x, &y);
        for (d, n) in &prof.dims {
            prop_assert_eq!(basis.get(d).map_or(0, Vec::len), *n);
        }
        for (d, maps) in &basis {
            prop_assert_eq!(maps.len(), prof.get(*d));
        }
    }
}
