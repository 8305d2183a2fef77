//! Bounded complexes of indecomposable projectives with path-labelled
//! differentials, and the string and band complexes of graded curves.
//!
//! A component labelled by a path `u` from `a` to `b` is a map from the
//! term at `a` to the term at `b`; following it by a component labelled `w`
//! gives the label `u·w`.

use std::collections::{BTreeMap, HashMap};

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::curves::{validate_word, CurveWord, GradedCurve, Grading, Shape};
use crate::error::WordError;
use crate::presentation::{GentlePresentation, Path};
use crate::surface::{DiscModel, Occ};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    pub vertex: usize,
    pub degree: i64,
}

/// One differential entry from term `from` (degree n) to term `to`
/// (degree n+1).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entry {
    pub from: usize,
    pub to: usize,
    pub coeffs: Vec<(Rational64, Path)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "lowercase")]
pub enum ComplexKind {
    String,
    Band { lambda: Rational64 },
    General,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjComplex {
    pub terms: Vec<Term>,
    pub entries: Vec<Entry>,
    pub kind: ComplexKind,
}

/// Two differential entries whose composite does not vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSquaredWitness {
    pub first: usize,
    pub second: usize,
}

impl ProjComplex {
    pub fn zero() -> Self {
        ProjComplex {
            terms: Vec::new(),
            entries: Vec::new(),
            kind: ComplexKind::General,
        }
    }

    pub fn stalk(v: usize, degree: i64) -> Self {
        ProjComplex {
            terms: vec![Term { vertex: v, degree }],
            entries: Vec::new(),
            kind: ComplexKind::String,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let lo = self.terms.iter().map(|t| t.degree).min()?;
        let hi = self.terms.iter().map(|t| t.degree).max()?;
        Some((lo, hi))
    }

    /// Total dimension over the field, given projective dimensions.
    pub fn total_dim(&self, proj_dims: &[usize]) -> usize {
        self.terms.iter().map(|t| proj_dims[t.vertex]).sum()
    }

    /// `[n]`: degrees drop by `n`, the differential picks up `(-1)^n`.
    pub fn shift(&self, n: i64) -> ProjComplex {
        let sign = if n.rem_euclid(2) == 1 { -1 } else { 1 };
        ProjComplex {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    vertex: t.vertex,
                    degree: t.degree - n,
                })
                .collect(),
            entries: self
                .entries
                .iter()
                .map(|e| Entry {
                    from: e.from,
                    to: e.to,
                    coeffs: e
                        .coeffs
                        .iter()
                        .map(|(c, u)| (c * Rational64::from_integer(sign), u.clone()))
                        .collect(),
                })
                .collect(),
            kind: self.kind.clone(),
        }
    }

    pub fn direct_sum(&self, other: &ProjComplex) -> ProjComplex {
        let off = self.terms.len();
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|e| Entry {
            from: e.from + off,
            to: e.to + off,
            coeffs: e.coeffs.clone(),
        }));
        ProjComplex {
            terms,
            entries,
            kind: ComplexKind::General,
        }
    }

    /// Terms sorted by (degree, vertex) with entries renumbered and merged;
    /// ties keep construction order.
    pub fn canonical(&self) -> ProjComplex {
        let mut order: Vec<usize> = (0..self.terms.len()).collect();
        order.sort_by_key(|&i| (self.terms[i].degree, self.terms[i].vertex));
        let mut pos = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let mut merged: BTreeMap<(usize, usize), BTreeMap<Path, Rational64>> = BTreeMap::new();
        for e in &self.entries {
            let slot = merged.entry((pos[e.from], pos[e.to])).or_default();
            for (c, u) in &e.coeffs {
                *slot.entry(u.clone()).or_insert_with(Rational64::zero) += c;
            }
        }
        let entries = merged
            .into_iter()
            .filter_map(|((from, to), m)| {
                let coeffs: Vec<_> = m.into_iter().filter(|(_, c)| !c.is_zero()).map(|(u, c)| (c, u)).collect();
                (!coeffs.is_empty()).then_some(Entry { from, to, coeffs })
            })
            .collect();
        ProjComplex {
            terms: order.iter().map(|&i| self.terms[i]).collect(),
            entries,
            kind: self.kind.clone(),
        }
    }

    pub fn to_json(&self, p: &GentlePresentation) -> serde_json::Value {
        serde_json::json!({
            "kind": self.kind,
            "terms": self.terms.iter().map(|t| serde_json::json!({
                "vertex": p.vertex_name(t.vertex),
                "degree": t.degree,
            })).collect::<Vec<_>>(),
            "entries": self.entries.iter().map(|e| serde_json::json!({
                "from": e.from,
                "to": e.to,
                "coeffs": e.coeffs.iter().map(|(c, u)| serde_json::json!({
                    "scalar": c.to_string(),
                    "path": p.path_ids(u),
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self, p: &GentlePresentation) -> String {
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            out.push_str(&format!("[{i}] P{} in degree {}\n", p.vertex_name(t.vertex), t.degree));
        }
        for e in &self.entries {
            let label = e
                .coeffs
                .iter()
                .map(|(c, u)| {
                    if c.is_one() {
                        p.path_to_string(u)
                    } else {
                        format!("{}*{}", c, p.path_to_string(u))
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ");
            out.push_str(&format!("[{}] -> [{}]: {}\n", e.from, e.to, label));
        }
        out
    }
}

fn gap_entries(
    p: &GentlePresentation,
    m: &DiscModel,
    w: &CurveWord,
    lambda: Option<Rational64>,
) -> Vec<Entry> {
    let l = w.len();
    w.gaps(m)
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let j = (i + 1) % l;
            let (from, to) = if g.is_forward() { (i, j) } else { (j, i) };
            let c = match (i, lambda) {
                (0, Some(lam)) => lam,
                _ => Rational64::one(),
            };
            Entry {
                from,
                to,
                coeffs: vec![(c, g.path(p, m))],
            }
        })
        .collect()
}

fn terms_of(m: &DiscModel, g: &GradedCurve) -> Vec<Term> {
    g.word
        .crossings(m)
        .into_iter()
        .zip(&g.grading.degrees)
        .map(|(vertex, &degree)| Term { vertex, degree })
        .collect()
}

pub fn string_complex(
    p: &GentlePresentation,
    m: &DiscModel,
    g: &GradedCurve,
) -> Result<ProjComplex, WordError> {
    if g.word.shape != Shape::Arc {
        return Err(WordError::WrongShape("finite arc"));
    }
    if let Some(e) = validate_word(p, m, &g.word).into_iter().next() {
        return Err(e);
    }
    if !g.is_consistent(m) {
        return Err(WordError::Syntax("grading violates the degree rule".into()));
    }
    Ok(ProjComplex {
        terms: terms_of(m, g),
        entries: gap_entries(p, m, &g.word, None),
        kind: ComplexKind::String,
    })
}

pub fn band_complex(
    p: &GentlePresentation,
    m: &DiscModel,
    g: &GradedCurve,
    lambda: Rational64,
) -> Result<ProjComplex, WordError> {
    if g.word.shape != Shape::Band {
        return Err(WordError::WrongShape("band"));
    }
    if lambda.is_zero() {
        return Err(WordError::ZeroParameter);
    }
    if let Some(e) = validate_word(p, m, &g.word).into_iter().next() {
        return Err(e);
    }
    if !g.is_consistent(m) {
        return Err(WordError::Syntax("grading violates the degree rule".into()));
    }
    Ok(ProjComplex {
        terms: terms_of(m, g),
        entries: gap_entries(p, m, &g.word, Some(lambda)),
        kind: ComplexKind::Band { lambda },
    })
}

/// String complex for arcs, band complex with parameter `lambda` for bands.
pub fn curve_complex(
    p: &GentlePresentation,
    m: &DiscModel,
    g: &GradedCurve,
    lambda: Rational64,
) -> Result<ProjComplex, WordError> {
    match g.word.shape {
        Shape::Arc => string_complex(p, m, g),
        Shape::Band => band_complex(p, m, g, lambda),
    }
}

/// Sum of the composites of every pair of consecutive entries, per
/// (source term, target term, path).
pub fn check_dsquared(p: &GentlePresentation, x: &ProjComplex) -> Result<(), DSquaredWitness> {
    let mut acc: HashMap<(usize, usize, Path), (Rational64, usize, usize)> = HashMap::new();
    for (i, e1) in x.entries.iter().enumerate() {
        for (j, e2) in x.entries.iter().enumerate() {
            if e1.to != e2.from {
                continue;
            }
            for (c1, u) in &e1.coeffs {
                for (c2, w) in &e2.coeffs {
                    if let Some(uw) = p.multiply(u, w) {
                        let slot = acc
                            .entry((e1.from, e2.to, uw))
                            .or_insert((Rational64::zero(), i, j));
                        slot.0 += c1 * c2;
                    }
                }
            }
        }
    }
    match acc.into_values().find(|(c, _, _)| !c.is_zero()) {
        Some((_, first, second)) => Err(DSquaredWitness { first, second }),
        None => Ok(()),
    }
}

/// Whether no differential component is an invertible scalar multiple of a
/// trivial path.
pub fn is_minimal(x: &ProjComplex) -> bool {
    x.entries
        .iter()
        .all(|e| e.coeffs.iter().all(|(c, u)| c.is_zero() || !u.is_trivial()))
}

type Lin = Vec<(Rational64, Path)>;

fn lin_mul(p: &GentlePresentation, a: &Lin, b: &Lin) -> Lin {
    let mut acc: BTreeMap<Path, Rational64> = BTreeMap::new();
    for (c1, u) in a {
        for (c2, w) in b {
            if let Some(uw) = p.multiply(u, w) {
                *acc.entry(uw).or_insert_with(Rational64::zero) += c1 * c2;
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(u, c)| (c, u)).collect()
}

/// Inverse of `c·e + n` with `n` in the radical, as a finite series.
fn lin_inverse(p: &GentlePresentation, x: &Lin, v: usize) -> Lin {
    let e = Path::trivial(v);
    let c = x.iter().find(|(_, u)| *u == e).map(|(c, _)| *c).unwrap();
    let n: Lin = x
        .iter()
        .filter(|(_, u)| *u != e)
        .map(|(k, u)| (-k / c, u.clone()))
        .collect();
    let mut out: Lin = vec![(Rational64::one() / c, e)];
    let mut power: Lin = out.clone();
    loop {
        power = lin_mul(p, &n, &power);
        if power.is_empty() {
            break;
        }
        out.extend(power.iter().cloned());
    }
    let mut acc: BTreeMap<Path, Rational64> = BTreeMap::new();
    for (c, u) in out {
        *acc.entry(u).or_insert_with(Rational64::zero) += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(u, c)| (c, u)).collect()
}

/// Homotopy equivalent complex without invertible differential components,
/// by repeated Gaussian elimination.
pub fn minimize(p: &GentlePresentation, x: &ProjComplex) -> ProjComplex {
    let mut terms: Vec<Option<Term>> = x.terms.iter().copied().map(Some).collect();
    let mut d: BTreeMap<(usize, usize), Lin> = BTreeMap::new();
    for e in &x.entries {
        let slot = d.entry((e.from, e.to)).or_default();
        slot.extend(e.coeffs.iter().filter(|(c, _)| !c.is_zero()).cloned());
    }
    let invertible = |(&(i, j), l): (&(usize, usize), &Lin)| {
        l.iter()
            .any(|(c, u)| !c.is_zero() && u.is_trivial())
            .then_some((i, j))
    };
    while let Some((i, j)) = d.iter().find_map(invertible) {
        let v = terms[i].unwrap().vertex;
        let inv = lin_inverse(p, &d[&(i, j)], v);
        let into_j: Vec<(usize, Lin)> = d
            .iter()
            .filter(|((s, t), _)| *t == j && *s != i)
            .map(|((s, _), l)| (*s, l.clone()))
            .collect();
        let out_of_i: Vec<(usize, Lin)> = d
            .iter()
            .filter(|((s, t), _)| *s == i && *t != j)
            .map(|((_, t), l)| (*t, l.clone()))
            .collect();
        d.retain(|(s, t), _| ![i, j].contains(s) && ![i, j].contains(t));
        for (s, a) in &into_j {
            let a_inv = lin_mul(p, a, &inv);
            for (t, b) in &out_of_i {
                let prod = lin_mul(p, &a_inv, b);
                if prod.is_empty() {
                    continue;
                }
                let slot = d.entry((*s, *t)).or_default();
                slot.extend(prod.into_iter().map(|(c, u)| (-c, u)));
                let mut acc: BTreeMap<Path, Rational64> = BTreeMap::new();
                for (c, u) in slot.drain(..) {
                    *acc.entry(u).or_insert_with(Rational64::zero) += c;
                }
                *slot = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(u, c)| (c, u)).collect();
            }
        }
        d.retain(|_, l| !l.is_empty());
        terms[i] = None;
        terms[j] = None;
    }
    let mut index = vec![usize::MAX; terms.len()];
    let mut kept = Vec::new();
    for (k, t) in terms.iter().enumerate() {
        if let Some(t) = t {
            index[k] = kept.len();
            kept.push(*t);
        }
    }
    ProjComplex {
        terms: kept,
        entries: d
            .into_iter()
            .map(|((s, t), coeffs)| Entry {
                from: index[s],
                to: index[t],
                coeffs,
            })
            .collect(),
        kind: ComplexKind::General,
    }
}

/// Recover the graded arc whose string complex is `x`, if there is one.
///
/// The differential graph must be a simple path whose every edge carries a
/// single nonzero multiple of a thread subpath; scalars are irrelevant since
/// a path graph can be rescaled term by term.
pub fn identify_string(
    p: &GentlePresentation,
    m: &DiscModel,
    x: &ProjComplex,
) -> Option<GradedCurve> {
    let n = x.terms.len();
    if n == 0 {
        return None;
    }
    if n == 1 {
        if !x.entries.is_empty() {
            return None;
        }
        let t = x.terms[0];
        return Some(GradedCurve {
            word: CurveWord::dual_arc(m, t.vertex),
            grading: Grading {
                degrees: vec![t.degree],
            },
        });
    }
    if x.entries.len() != n - 1 {
        return None;
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, e) in x.entries.iter().enumerate() {
        let nonzero: Vec<_> = e.coeffs.iter().filter(|(c, _)| !c.is_zero()).collect();
        if nonzero.len() != 1 || nonzero[0].1.is_trivial() || e.from == e.to {
            return None;
        }
        adj[e.from].push(k);
        adj[e.to].push(k);
    }
    if adj.iter().any(|a| a.len() > 2) {
        return None;
    }
    let start = (0..n).find(|&i| adj[i].len() == 1)?;
    // walk the path graph
    let mut order = vec![start];
    let mut used: Vec<usize> = Vec::new();
    while order.len() < n {
        let cur = *order.last().unwrap();
        let k = *adj[cur].iter().find(|k| !used.contains(k))?;
        used.push(k);
        let e = &x.entries[k];
        order.push(if e.from == cur { e.to } else { e.from });
    }
    let mut exits = vec![Occ { disc: 0, pos: 0 }; n];
    let mut entries_at = vec![Occ { disc: 0, pos: 0 }; n];
    for i in 0..n - 1 {
        let (a, b) = (order[i], order[i + 1]);
        let e = &x.entries[used[i]];
        let u = &e.coeffs.iter().find(|(c, _)| !c.is_zero()).unwrap().1;
        let disc = m.discs.iter().position(|d| d.thread.arrows.contains(&u.arrows[0]))?;
        let th = &m.discs[disc].thread.arrows;
        let lo = th.iter().position(|&y| y == u.arrows[0])?;
        let hi = lo + u.len();
        if hi > th.len() || th[lo..hi] != u.arrows[..] {
            return None;
        }
        // the entry runs from the lower position to the higher one
        let (pa, pb) = if e.from == a { (lo, hi) } else { (hi, lo) };
        entries_at[i] = Occ { disc, pos: pa };
        exits[i + 1] = Occ { disc, pos: pb };
        if m.vertex(entries_at[i]) != x.terms[a].vertex || m.vertex(exits[i + 1]) != x.terms[b].vertex {
            return None;
        }
    }
    exits[0] = m.partner(entries_at[0]);
    for i in 1..n - 1 {
        if m.partner(exits[i]) != entries_at[i] {
            return None;
        }
    }
    let g = GradedCurve {
        word: CurveWord::arc(exits),
        grading: Grading {
            degrees: order.iter().map(|&i| x.terms[i].degree).collect(),
        },
    };
    (validate_word(p, m, &g.word).is_empty() && g.is_consistent(m)).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named;
    use crate::curves::{boundary_segments, graded, random_arc, random_band};
    use crate::surface::build_disc_model;
    use rand::SeedableRng;

    #[test]
    fn dual_arc_is_stalk() {
        let p = named::kronecker();
        let m = build_disc_model(&p).unwrap();
        let g = graded(&m, CurveWord::dual_arc(&m, 0), 0).unwrap();
        let x = string_complex(&p, &m, &g).unwrap();
        assert_eq!(x.terms, vec![Term { vertex: 0, degree: 0 }]);
        assert!(x.entries.is_empty());
    }

    #[test]
    fn a2_segment_is_two_term() {
        let p = named::a2();
        let m = build_disc_model(&p).unwrap();
        let seg = boundary_segments(&m).into_iter().find(|s| s.len() == 2).unwrap();
        let x = string_complex(&p, &m, &graded(&m, seg, 0).unwrap()).unwrap();
        assert_eq!(x.terms.len(), 2);
        assert_eq!(x.entries.len(), 1);
        assert_eq!(x.entries[0].coeffs[0].1.arrows, vec![0]);
        let (from, to) = (x.entries[0].from, x.entries[0].to);
        assert_eq!(x.terms[to].degree, x.terms[from].degree + 1);
        assert!(check_dsquared(&p, &x).is_ok());
    }

    #[test]
    fn kronecker_band_complex() {
        let p = named::kronecker();
        let m = build_disc_model(&p).unwrap();
        let band = CurveWord::band(vec![Occ { disc: 0, pos: 0 }, Occ { disc: 1, pos: 1 }]);
        let g = graded(&m, band, 0).unwrap();
        let x = band_complex(&p, &m, &g, Rational64::new(2, 1)).unwrap();
        assert_eq!(x.entries.len(), 2);
        assert!(x.entries.iter().all(|e| e.from == 0 && e.to == 1));
        let y = band_complex(&p, &m, &g, Rational64::new(3, 1)).unwrap();
        assert_ne!(x, y);
        assert!(band_complex(&p, &m, &g, Rational64::zero()).is_err());
    }

    #[test]
    fn shift_round_trip() {
        let p = named::a2();
        let m = build_disc_model(&p).unwrap();
        let seg = boundary_segments(&m).into_iter().find(|s| s.len() == 2).unwrap();
        let x = string_complex(&p, &m, &graded(&m, seg, 0).unwrap()).unwrap();
        assert_eq!(x.shift(1).shift(-1), x);
        assert_eq!(ProjComplex::stalk(0, 0).shift(1).terms[0].degree, -1);
    }

    #[test]
    fn dsquared_detects_nonzero_composite() {
        let p = named::a3_linear();
        let path = |a: usize| p.path(&[a]).unwrap();
        let x = ProjComplex {
            terms: vec![
                Term { vertex: 0, degree: 0 },
                Term { vertex: 1, degree: 1 },
                Term { vertex: 2, degree: 2 },
            ],
            entries: vec![
                Entry { from: 0, to: 1, coeffs: vec![(Rational64::one(), path(0))] },
                Entry { from: 1, to: 2, coeffs: vec![(Rational64::one(), path(1))] },
            ],
            kind: ComplexKind::General,
        };
        assert!(check_dsquared(&p, &x).is_err());
    }

    #[test]
    fn string_round_trip_and_dsquared_on_random_words() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for (_, p) in named::all() {
            let m = build_disc_model(&p).unwrap();
            for _ in 0..30 {
                let w = random_arc(&mut rng, &m, 6);
                let g = graded(&m, w, 2).unwrap();
                let x = string_complex(&p, &m, &g).unwrap();
                assert!(check_dsquared(&p, &x).is_ok());
                assert!(is_minimal(&x));
                let back = identify_string(&p, &m, &x).unwrap();
                assert_eq!(back.canonical(&m), g.canonical(&m));
            }
            if let Some(b) = random_band(&mut rng, &m, 6, 300) {
                let g = graded(&m, b, 0).unwrap();
                let x = band_complex(&p, &m, &g, Rational64::new(5, 3)).unwrap();
                assert!(check_dsquared(&p, &x).is_ok());
                assert!(identify_string(&p, &m, &x).is_none());
            }
        }
    }

    #[test]
    fn direct_sum_of_stalks_is_not_a_string() {
        let p = named::a2();
        let m = build_disc_model(&p).unwrap();
        let x = ProjComplex::stalk(0, 0).direct_sum(&ProjComplex::stalk(1, 0));
        assert!(identify_string(&p, &m, &x).is_none());
    }

    #[test]
    fn minimize_removes_contractible_summands() {
        use crate::homalg::{mapping_cone, ChainMap, Oracle};
        let p = named::a3_with_relation();
        let m = build_disc_model(&p).unwrap();
        let o = Oracle::new(&p);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g = graded(&m, random_arc(&mut rng, &m, 5), 0).unwrap();
            let x = string_complex(&p, &m, &g).unwrap();
            let cone = mapping_cone(&ChainMap::identity(&x)).unwrap();
            assert!(minimize(&p, &cone).is_zero());
            let padded = x.direct_sum(&cone);
            let small = minimize(&p, &padded);
            assert!(is_minimal(&small));
            assert_eq!(small.terms.len(), x.terms.len());
            assert!(check_dsquared(&p, &small).is_ok());
            assert!(o.is_isomorphic(&small, &x));
        }
    }
}
