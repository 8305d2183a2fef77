//! Named example algebras and a seeded random generator of gentle
//! presentations.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::presentation::{validate_gentle, Arrow, GentlePresentation, Quiver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub count: usize,
    pub max_vertices: usize,
    pub max_arrows: usize,
    pub seed: u64,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            count: 50,
            max_vertices: 8,
            max_arrows: 10,
            seed: 0x9e11e,
        }
    }
}

/// Connected gentle presentations drawn by random slot pairing.
///
/// Each vertex offers two incoming and two outgoing slots. Arrows join a free
/// outgoing slot to a free incoming slot, then at every vertex the incoming
/// and outgoing arrows are paired into relation and non-relation composites.
/// Samples with an unbounded path algebra or a disconnected quiver are
/// rejected and redrawn.
pub fn gen_corpus(spec: &CorpusSpec) -> Vec<GentlePresentation> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    while out.len() < spec.count {
        if let Some(p) = sample(&mut rng, spec) {
            out.push(p);
        }
    }
    out
}

fn sample(rng: &mut ChaCha8Rng, spec: &CorpusSpec) -> Option<GentlePresentation> {
    let n = rng.gen_range(1..=spec.max_vertices.max(1));
    let m_cap = spec.max_arrows.min(2 * n);
    let m = if m_cap == 0 {
        0
    } else {
        rng.gen_range(n.saturating_sub(1).min(m_cap)..=m_cap)
    };
    let mut out_deg = vec![0usize; n];
    let mut in_deg = vec![0usize; n];
    let mut arrows = Vec::new();
    for i in 0..m {
        let sources: Vec<usize> = (0..n).filter(|&v| out_deg[v] < 2).collect();
        let targets: Vec<usize> = (0..n).filter(|&v| in_deg[v] < 2).collect();
        let (&s, &t) = (sources.choose(rng)?, targets.choose(rng)?);
        out_deg[s] += 1;
        in_deg[t] += 1;
        arrows.push(Arrow {
            id: format!("a{i}"),
            source: s,
            target: t,
        });
    }
    let quiver = Quiver {
        vertices: (0..n).map(|v| format!("{}", v + 1)).collect(),
        arrows,
    };
    if quiver.components().len() != 1 {
        return None;
    }
    let mut relations = std::collections::BTreeSet::new();
    for v in 0..n {
        let mut inc = quiver.incoming(v);
        let mut outg = quiver.outgoing(v);
        inc.shuffle(rng);
        outg.shuffle(rng);
        match (inc.len(), outg.len()) {
            (0, _) | (_, 0) => {}
            (1, 1) => {
                if rng.gen_bool(0.5) {
                    relations.insert((inc[0], outg[0]));
                }
            }
            (2, 1) => {
                relations.insert((inc[0], outg[0]));
            }
            (1, 2) => {
                relations.insert((inc[0], outg[0]));
            }
            _ => {
                relations.insert((inc[0], outg[0]));
                relations.insert((inc[1], outg[1]));
            }
        }
    }
    let p = GentlePresentation { quiver, relations };
    validate_gentle(&p).is_ok().then_some(p)
}

/// Small algebras used throughout tests, examples and the self-test.
pub mod named {
    use crate::presentation::GentlePresentation;

    pub fn a1() -> GentlePresentation {
        GentlePresentation::new(&["1"], &[], &[])
    }

    pub fn a2() -> GentlePresentation {
        GentlePresentation::new(&["1", "2"], &[("a", "1", "2")], &[])
    }

    pub fn kronecker() -> GentlePresentation {
        GentlePresentation::new(&["x", "y"], &[("a", "x", "y"), ("b", "x", "y")], &[])
    }

    pub fn dual_numbers() -> GentlePresentation {
        GentlePresentation::new(&["1"], &[("a", "1", "1")], &[("a", "a")])
    }

    /// A loop without relations: not admissible.
    pub fn free_loop() -> GentlePresentation {
        GentlePresentation::new(&["1"], &[("a", "1", "1")], &[])
    }

    /// Type A with the given orientation word: `'>'` is `i -> i+1`, `'<'` is
    /// `i+1 -> i`.
    pub fn linear_a(orientation: &str) -> GentlePresentation {
        let n = orientation.len() + 1;
        let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let vs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let ids: Vec<String> = (0..orientation.len()).map(|i| format!("a{}", i + 1)).collect();
        let arrows: Vec<(&str, &str, &str)> = orientation
            .chars()
            .enumerate()
            .map(|(i, c)| {
                if c == '>' {
                    (ids[i].as_str(), vs[i], vs[i + 1])
                } else {
                    (ids[i].as_str(), vs[i + 1], vs[i])
                }
            })
            .collect();
        GentlePresentation::new(&vs, &arrows, &[])
    }

    pub fn a3_linear() -> GentlePresentation {
        linear_a(">>")
    }

    /// A3 whose middle vertex is a sink.
    pub fn a3_zigzag() -> GentlePresentation {
        linear_a("><")
    }

    pub fn a3_orientations() -> Vec<GentlePresentation> {
        ["><", ">>", "<>", "<<"].iter().map(|o| linear_a(o)).collect()
    }

    pub fn a3_with_relation() -> GentlePresentation {
        GentlePresentation::new(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "2", "3")],
            &[("a", "b")],
        )
    }

    /// Oriented three-cycle with all three relations.
    pub fn relation_triangle() -> GentlePresentation {
        GentlePresentation::new(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")],
            &[("a", "b"), ("b", "c"), ("c", "a")],
        )
    }

    /// Affine type with one relation on a square.
    pub fn square_one_relation() -> GentlePresentation {
        GentlePresentation::new(
            &["1", "2", "3", "4"],
            &[("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4")],
            &[("a", "b")],
        )
    }

    pub fn all() -> Vec<(String, GentlePresentation)> {
        let mut out = vec![
            ("a1".to_string(), a1()),
            ("a2".to_string(), a2()),
            ("kronecker".to_string(), kronecker()),
            ("dual_numbers".to_string(), dual_numbers()),
            ("a3_with_relation".to_string(), a3_with_relation()),
            ("relation_triangle".to_string(), relation_triangle()),
            ("square_one_relation".to_string(), square_one_relation()),
        ];
        for o in ["><", ">>", "<>", "<<", ">>>", "><>", "<<>", "<><"] {
            out.push((format!("a{}_{}", o.len() + 1, o), linear_a(o)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible() {
        let spec = CorpusSpec {
            count: 20,
            ..CorpusSpec::default()
        };
        assert_eq!(gen_corpus(&spec), gen_corpus(&spec));
    }

    #[test]
    fn corpus_members_validate() {
        let spec = CorpusSpec {
            count: 50,
            max_vertices: 6,
            ..CorpusSpec::default()
        };
        let corpus = gen_corpus(&spec);
        assert_eq!(corpus.len(), 50);
        for p in &corpus {
            assert!(validate_gentle(p).is_ok());
            assert_eq!(p.quiver.components().len(), 1);
        }
    }

    #[test]
    fn zero_arrows_gives_semisimple() {
        let spec = CorpusSpec {
            count: 5,
            max_vertices: 4,
            max_arrows: 0,
            seed: 3,
        };
        for p in gen_corpus(&spec) {
            assert_eq!(p.num_arrows(), 0);
        }
    }
}
