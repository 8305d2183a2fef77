//! Graded arcs and loops on the disc model, written as the sequence of
//! laminate sides they leave discs through.
//!
//! An arc starts at the marked point of the disc of its first exit and ends
//! at the marked point of the disc it enters last. Between two consecutive
//! crossings it runs through one disc from the entry side to the next exit
//! side; that segment is *forward* when the exit position is larger, which
//! raises the degree by one and contributes the thread subpath as a map from
//! the earlier crossing to the later one.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::Rational64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::WordError;
use crate::presentation::{GentlePresentation, Path};
use crate::surface::{trace_boundary, DiscModel, Occ};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Arc,
    Band,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveWord {
    pub shape: Shape,
    pub exits: Vec<Occ>,
}

/// Degrees of the crossings, in word order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grading {
    pub degrees: Vec<i64>,
}

impl Grading {
    pub fn shifted(&self, n: i64) -> Grading {
        Grading {
            degrees: self.degrees.iter().map(|d| d + n).collect(),
        }
    }
}

/// A word together with a grading.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradedCurve {
    pub word: CurveWord,
    pub grading: Grading,
}

impl GradedCurve {
    pub fn shifted(&self, n: i64) -> GradedCurve {
        GradedCurve {
            word: self.word.clone(),
            grading: self.grading.shifted(n),
        }
    }
}

/// The part of a curve inside one disc between two crossings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gap {
    pub disc: usize,
    pub from: usize,
    pub to: usize,
}

impl Gap {
    pub fn is_forward(&self) -> bool {
        self.to > self.from
    }

    pub fn sign(&self) -> i64 {
        if self.is_forward() {
            1
        } else {
            -1
        }
    }

    /// Thread subpath joining the two sides, lower position first.
    pub fn path(&self, p: &GentlePresentation, m: &DiscModel) -> Path {
        let (lo, hi) = (self.from.min(self.to), self.from.max(self.to));
        m.thread_path(p, self.disc, lo, hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveClass {
    Essential,
    BoundarySegment,
    BoundaryNonsegment,
    Generic,
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveClass::Essential => "essential",
            CurveClass::BoundarySegment => "boundary-segment",
            CurveClass::BoundaryNonsegment => "boundary-nonsegment",
            CurveClass::Generic => "generic",
        })
    }
}

/// Which way endpoints slide along the boundary under the translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SlideDirection {
    /// Against the boundary walk: every endpoint moves to the previous
    /// marked point.
    #[default]
    Backward,
    Forward,
}

impl CurveWord {
    pub fn arc(exits: Vec<Occ>) -> Self {
        CurveWord {
            shape: Shape::Arc,
            exits,
        }
    }

    pub fn band(exits: Vec<Occ>) -> Self {
        CurveWord {
            shape: Shape::Band,
            exits,
        }
    }

    /// The curve dual to the laminate of vertex `v`, leaving through its
    /// first side.
    pub fn dual_arc(m: &DiscModel, v: usize) -> Self {
        CurveWord::arc(vec![m.sides[v][0]])
    }

    pub fn len(&self) -> usize {
        self.exits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exits.is_empty()
    }

    pub fn is_band(&self) -> bool {
        self.shape == Shape::Band
    }

    pub fn crossings(&self, m: &DiscModel) -> Vec<usize> {
        self.exits.iter().map(|&o| m.vertex(o)).collect()
    }

    pub fn gaps(&self, m: &DiscModel) -> Vec<Gap> {
        let l = self.exits.len();
        let count = match self.shape {
            Shape::Arc => l.saturating_sub(1),
            Shape::Band => l,
        };
        (0..count)
            .map(|i| {
                let entry = m.partner(self.exits[i]);
                let exit = self.exits[(i + 1) % l];
                Gap {
                    disc: entry.disc,
                    from: entry.pos,
                    to: exit.pos,
                }
            })
            .collect()
    }

    pub fn start_disc(&self) -> usize {
        self.exits[0].disc
    }

    pub fn end_disc(&self, m: &DiscModel) -> usize {
        m.end_disc(&self.exits)
    }

    pub fn reversed(&self, m: &DiscModel) -> CurveWord {
        CurveWord {
            shape: self.shape,
            exits: reverse_path(m, &self.exits),
        }
    }

    /// Lexicographically least representative among reversals (and
    /// rotations for bands).
    pub fn canonical(&self, m: &DiscModel) -> CurveWord {
        match self.shape {
            Shape::Arc => std::cmp::min(self.clone(), self.reversed(m)),
            Shape::Band => {
                let rev = self.reversed(m);
                let best = |w: &CurveWord| crate::presentation::least_rotation(&w.exits);
                let exits = std::cmp::min(best(self), best(&rev));
                CurveWord::band(exits)
            }
        }
    }

    pub fn is_primitive(&self) -> bool {
        let l = self.exits.len();
        (1..l).filter(|r| l.is_multiple_of(*r)).all(|r| {
            (0..l).any(|i| self.exits[i] != self.exits[(i + r) % l])
        })
    }
}

pub fn reverse_path(m: &DiscModel, exits: &[Occ]) -> Vec<Occ> {
    exits.iter().rev().map(|&o| m.partner(o)).collect()
}

/// Every violated word invariant; empty means valid.
pub fn validate_word(p: &GentlePresentation, m: &DiscModel, w: &CurveWord) -> Vec<WordError> {
    let mut errs = Vec::new();
    if w.exits.is_empty() {
        return vec![WordError::Empty];
    }
    for o in &w.exits {
        if o.disc >= m.discs.len() || o.pos >= m.disc_len(o.disc) {
            return vec![WordError::UnknownDisc(format!("({}, {})", o.disc, o.pos))];
        }
    }
    let l = w.exits.len();
    let links = match w.shape {
        Shape::Arc => l - 1,
        Shape::Band => l,
    };
    for i in 0..links {
        let entry = m.partner(w.exits[i]);
        let exit = w.exits[(i + 1) % l];
        if entry.disc != exit.disc {
            errs.push(WordError::BadGap {
                index: i,
                message: format!(
                    "leaves {} but the previous crossing enters {}",
                    m.disc_name(exit.disc),
                    m.disc_name(entry.disc)
                ),
            });
        } else if entry.pos == exit.pos {
            errs.push(WordError::NotReduced(i));
        }
    }
    if w.is_band() && errs.is_empty() {
        if !w.is_primitive() {
            errs.push(WordError::Imprimitive);
        }
        let wn = winding_number(m, w);
        if wn != 0 {
            errs.push(WordError::Ungradable(wn));
        }
    }
    let _ = p;
    errs
}

/// Sum of the gap signs of a band.
pub fn winding_number(m: &DiscModel, w: &CurveWord) -> i64 {
    w.gaps(m).iter().map(Gap::sign).sum()
}

pub fn grade_word(m: &DiscModel, w: &CurveWord, seed: i64) -> Result<Grading, WordError> {
    if w.is_band() {
        let wn = winding_number(m, w);
        if wn != 0 {
            return Err(WordError::Ungradable(wn));
        }
    }
    let mut degrees = vec![seed];
    for g in w.gaps(m).iter().take(w.exits.len() - 1) {
        let last = *degrees.last().unwrap();
        degrees.push(last + g.sign());
    }
    Ok(Grading { degrees })
}

pub fn graded(m: &DiscModel, w: CurveWord, seed: i64) -> Result<GradedCurve, WordError> {
    let grading = grade_word(m, &w, seed)?;
    Ok(GradedCurve { word: w, grading })
}

impl GradedCurve {
    pub fn reversed(&self, m: &DiscModel) -> GradedCurve {
        let mut degrees = self.grading.degrees.clone();
        degrees.reverse();
        let word = self.word.reversed(m);
        if self.word.is_band() {
            // the reversed band starts with the partner of the old last exit
            GradedCurve {
                word,
                grading: Grading { degrees },
            }
        } else {
            GradedCurve {
                word,
                grading: Grading { degrees },
            }
        }
    }

    /// Canonical orientation (and rotation) carrying the grading along.
    pub fn canonical(&self, m: &DiscModel) -> GradedCurve {
        let mut candidates = vec![self.clone(), self.reversed(m)];
        if self.word.is_band() {
            let l = self.word.len();
            candidates = candidates
                .into_iter()
                .flat_map(|c| (0..l).map(move |r| c.rotated(r)))
                .collect();
        }
        candidates
            .into_iter()
            .min_by(|a, b| {
                (&a.word.exits, &a.grading.degrees).cmp(&(&b.word.exits, &b.grading.degrees))
            })
            .unwrap()
    }

    pub fn rotated(&self, r: usize) -> GradedCurve {
        let l = self.word.len();
        GradedCurve {
            word: CurveWord {
                shape: self.word.shape,
                exits: (0..l).map(|i| self.word.exits[(i + r) % l]).collect(),
            },
            grading: Grading {
                degrees: (0..l).map(|i| self.grading.degrees[(i + r) % l]).collect(),
            },
        }
    }

    /// Checks the degree rule along every gap.
    pub fn is_consistent(&self, m: &DiscModel) -> bool {
        let d = &self.grading.degrees;
        d.len() == self.word.len()
            && self
                .word
                .gaps(m)
                .iter()
                .enumerate()
                .all(|(i, g)| d[(i + 1) % d.len()] - d[i] == g.sign())
    }
}

/// Sign of the step from crossing `i` to crossing `i + 1` of a possibly
/// unreduced path.
///
/// A step that leaves a disc through the side it entered by is a U-turn. Its
/// sign is read off from where the surrounding path enters and leaves the
/// neighbouring disc: nested U-turns turn the same way, a zigzag of two
/// U-turns turns both ways, and otherwise the turn is to the left exactly when
/// the path re-enters before it leaves in the cyclic order starting just
/// after the side in question.
fn step_signs(m: &DiscModel, exits: &[Occ], fixed: &HashMap<usize, i64>) -> Vec<i64> {
    let n = exits.len();
    let mut memo: HashMap<usize, i64> = fixed.clone();
    (0..n.saturating_sub(1))
        .map(|i| {
            let entry = m.partner(exits[i]);
            let exit = exits[i + 1];
            debug_assert_eq!(entry.disc, exit.disc, "path is not continuous");
            if let Some(&s) = fixed.get(&i) {
                s
            } else if entry.pos != exit.pos {
                if exit.pos > entry.pos {
                    1
                } else {
                    -1
                }
            } else {
                uturn_sign(m, exits, i, &mut memo, &mut BTreeSet::new())
            }
        })
        .collect()
}

fn uturn_sign(
    m: &DiscModel,
    exits: &[Occ],
    i: usize,
    memo: &mut HashMap<usize, i64>,
    busy: &mut BTreeSet<usize>,
) -> i64 {
    if let Some(&s) = memo.get(&i) {
        return s;
    }
    if !busy.insert(i) {
        // a zigzag closed on itself: either orientation gives the same
        // degrees on the surviving crossings
        return 1;
    }
    let n = exits.len();
    let (mut l, mut r) = (i, i + 1);
    while l > 0 && r + 1 < n && exits[r + 1] == m.partner(exits[l - 1]) {
        l -= 1;
        r += 1;
    }
    let disc = exits[l].disc;
    let j = exits[l].pos;
    let k = m.disc_len(disc);
    let a = (l > 0).then(|| m.partner(exits[l - 1]).pos);
    let c = (r + 1 < n).then(|| exits[r + 1].pos);
    let s = if a == Some(j) {
        -uturn_sign(m, exits, l - 1, memo, busy)
    } else if c == Some(j) {
        -uturn_sign(m, exits, r, memo, busy)
    } else {
        // positions doubled, the marked point sits between k-1 and 0
        let key = |x: Option<usize>| {
            let v = x.map_or(2 * k as i64 - 1, |x| 2 * x as i64);
            (v - 2 * j as i64 - 1).rem_euclid(2 * k as i64)
        };
        if key(a) < key(c) {
            1
        } else {
            -1
        }
    };
    memo.insert(i, s);
    s
}

/// Degrees along an unreduced path given the degree of one crossing.
fn degrees_from_anchor(
    m: &DiscModel,
    exits: &[Occ],
    fixed: &HashMap<usize, i64>,
    anchor: usize,
    degree: i64,
) -> Vec<i64> {
    let signs = step_signs(m, exits, fixed);
    let mut d = vec![0i64; exits.len()];
    d[anchor] = degree;
    for i in anchor + 1..exits.len() {
        d[i] = d[i - 1] + signs[i - 1];
    }
    for i in (0..anchor).rev() {
        d[i] = d[i + 1] - signs[i];
    }
    d
}

/// Cancel backtracking pairs; surviving crossings keep their degrees.
fn free_reduce(m: &DiscModel, exits: &[Occ], degrees: &[i64]) -> (Vec<Occ>, Vec<i64>) {
    let mut stack: Vec<(Occ, i64)> = Vec::new();
    for (&o, &d) in exits.iter().zip(degrees) {
        match stack.last() {
            Some(&(top, _)) if m.partner(top) == o => {
                stack.pop();
            }
            _ => stack.push((o, d)),
        }
    }
    stack.into_iter().unzip()
}

/// Reduce an unreduced graded arc path, anchored at one known crossing.
///
/// `fixed` pins the sign of chosen steps, which is how callers that know the
/// geometry of a junction override the local U-turn rule.
pub fn reduce_graded_path(
    m: &DiscModel,
    exits: &[Occ],
    fixed: &HashMap<usize, i64>,
    anchor: usize,
    degree: i64,
) -> GradedCurve {
    let degrees = degrees_from_anchor(m, exits, fixed, anchor, degree);
    let (ex, deg) = free_reduce(m, exits, &degrees);
    let out = GradedCurve {
        word: CurveWord::arc(ex),
        grading: Grading { degrees: deg },
    };
    assert!(
        out.word.is_empty() || out.is_consistent(m),
        "grading lost consistency under reduction"
    );
    out
}

/// Boundary path ending at the marked point of each disc.
fn segments_into(m: &DiscModel) -> Vec<Vec<Occ>> {
    let mut into = vec![Vec::new(); m.discs.len()];
    for d in 0..m.discs.len() {
        let seg = m.boundary_segment(d);
        let end = m.end_disc(&seg);
        into[end] = seg;
    }
    into
}

/// The translation of a graded arc: both endpoints slide to the adjacent
/// marked point of their boundary component and the result is reduced.
pub fn tau_translate(m: &DiscModel, w: &GradedCurve) -> Result<GradedCurve, WordError> {
    tau_translate_dir(m, w, SlideDirection::default())
}

pub fn tau_translate_dir(
    m: &DiscModel,
    w: &GradedCurve,
    dir: SlideDirection,
) -> Result<GradedCurve, WordError> {
    if w.word.is_band() {
        return Err(WordError::WrongShape("finite arc"));
    }
    if w.word.is_empty() {
        return Err(WordError::Empty);
    }
    let start = w.word.start_disc();
    let end = w.word.end_disc(m);
    let (head, tail) = match dir {
        SlideDirection::Backward => {
            let into = segments_into(m);
            (into[start].clone(), reverse_path(m, &into[end]))
        }
        SlideDirection::Forward => (
            reverse_path(m, &m.boundary_segment(start)),
            m.boundary_segment(end),
        ),
    };
    let mut raw = head.clone();
    raw.extend_from_slice(&w.word.exits);
    raw.extend_from_slice(&tail);
    // the slid endpoint turns around the marked point: backwards into the
    // arc at the start, forwards out of it at the end
    let (s_in, s_out) = match dir {
        SlideDirection::Backward => (-1, 1),
        SlideDirection::Forward => (1, -1),
    };
    let a = head.len();
    let b = a + w.word.len() - 1;
    let fixed = HashMap::from([(a - 1, s_in), (b, s_out)]);
    let out = reduce_graded_path(m, &raw, &fixed, a, w.grading.degrees[0]);
    if out.word.is_empty() {
        return Err(WordError::Empty);
    }
    Ok(out)
}

/// All boundary-segment arcs, one per marked point, in disc order.
pub fn boundary_segments(m: &DiscModel) -> Vec<CurveWord> {
    (0..m.discs.len())
        .map(|d| CurveWord::arc(m.boundary_segment(d)))
        .collect()
}

/// Reduced loops parallel to boundary components, with the index of the
/// walk each runs along. Components bounding a disc give nothing.
pub fn boundary_loops(m: &DiscModel) -> Vec<(usize, CurveWord)> {
    let walks = trace_boundary(m).expect("closed walks");
    walks
        .iter()
        .enumerate()
        .filter_map(|(i, w)| {
            let exits = cyclic_reduce(m, &w.loop_exits(m));
            (!exits.is_empty()).then(|| (i, CurveWord::band(exits)))
        })
        .collect()
}

fn cyclic_reduce(m: &DiscModel, exits: &[Occ]) -> Vec<Occ> {
    let zeros = vec![0; exits.len()];
    let (mut ex, _) = free_reduce(m, exits, &zeros);
    while ex.len() >= 2 && m.partner(*ex.last().unwrap()) == ex[0] {
        ex.pop();
        ex.remove(0);
    }
    if ex.len() == 1 && m.partner(ex[0]) == ex[0] {
        ex.clear();
    }
    ex
}

/// Classify a word by its position relative to the boundary. Essential arcs
/// are recognised through the self-morphism bound of their string complex.
pub fn classify_word(p: &GentlePresentation, m: &DiscModel, w: &CurveWord) -> CurveClass {
    let canon = w.canonical(m);
    match w.shape {
        Shape::Arc => {
            if boundary_segments(m).iter().any(|s| s.canonical(m) == canon) {
                return CurveClass::BoundarySegment;
            }
            let g = graded(m, w.clone(), 0).expect("arcs are gradable");
            let x = crate::objects::string_complex(p, m, &g).expect("valid arc");
            let total: usize = crate::homalg::hom_profile(p, &x, &x).total();
            if total <= 2 {
                CurveClass::Essential
            } else {
                CurveClass::Generic
            }
        }
        Shape::Band => {
            if boundary_loops(m).iter().any(|(_, b)| b.canonical(m) == canon) {
                CurveClass::BoundaryNonsegment
            } else {
                CurveClass::Generic
            }
        }
    }
}

/// Resolve the intersection of two graded arcs at a shared marked point.
///
/// Both arcs are turned to start at the marked point of `disc`. The arc
/// leaving through the smaller position is the source of the intersection
/// morphism; the result runs back along the source, shifted by one, and
/// then out along the target. The two arcs must have equal degree at the
/// shared end so that the morphism sits in degree zero.
pub fn resolve_at_marked_point(
    m: &DiscModel,
    a: &GradedCurve,
    b: &GradedCurve,
    disc: usize,
) -> Result<(GradedCurve, bool), WordError> {
    let orient = |w: &GradedCurve| -> Option<GradedCurve> {
        if w.word.is_band() {
            return None;
        }
        if w.word.start_disc() == disc {
            Some(w.clone())
        } else if w.word.end_disc(m) == disc {
            Some(w.reversed(m))
        } else {
            None
        }
    };
    let (Some(a), Some(b)) = (orient(a), orient(b)) else {
        return Err(WordError::WrongShape("pair of arcs sharing the marked point"));
    };
    let (pa, pb) = (a.word.exits[0].pos, b.word.exits[0].pos);
    if pa == pb || a.grading.degrees[0] != b.grading.degrees[0] {
        return Err(WordError::WrongShape("transversal pair in matching degree"));
    }
    // true when `a` is the source
    let a_first = pa < pb;
    let (src, tgt) = if a_first { (a, b) } else { (b, a) };
    let src_rev = src.reversed(m).shifted(-1);
    let mut exits = src_rev.word.exits.clone();
    exits.extend_from_slice(&tgt.word.exits);
    let mut degrees = src_rev.grading.degrees.clone();
    degrees.extend_from_slice(&tgt.grading.degrees);
    let out = GradedCurve {
        word: CurveWord::arc(exits),
        grading: Grading { degrees },
    };
    debug_assert!(out.is_consistent(m));
    Ok((out, a_first))
}

/// A stretch of a curve inside one disc, entry and exit as doubled
/// positions with the marked point at `2k - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Passage {
    disc: usize,
    from: i64,
    to: i64,
}

fn passages(m: &DiscModel, w: &CurveWord) -> Vec<Passage> {
    let n = w.len();
    let mp = |d: usize| 2 * m.disc_len(d) as i64 - 1;
    let inner = |t: usize| {
        let e = m.partner(w.exits[(t + n - 1) % n]);
        Passage {
            disc: e.disc,
            from: 2 * e.pos as i64,
            to: 2 * w.exits[t % n].pos as i64,
        }
    };
    match w.shape {
        Shape::Band => (0..n).map(inner).collect(),
        Shape::Arc => {
            let first = w.exits[0];
            let last = m.partner(w.exits[n - 1]);
            std::iter::once(Passage {
                disc: first.disc,
                from: mp(first.disc),
                to: 2 * first.pos as i64,
            })
            .chain((1..n).map(inner))
            .chain(std::iter::once(Passage {
                disc: last.disc,
                from: 2 * last.pos as i64,
                to: mp(last.disc),
            }))
            .collect()
        }
    }
}

/// Clockwise distance from just after `base`.
fn cw(m: &DiscModel, disc: usize, base: i64, v: i64) -> i64 {
    (v - base - 1).rem_euclid(2 * m.disc_len(disc) as i64)
}

/// A transversal intersection of an arc with a loop, placed in one passage
/// of the arc. `turn` is the loop oriented so that leaving the arc onto it
/// is a right turn, rotated to start where it leaves the passage's disc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossing {
    pub passage: usize,
    /// Order along the passage: crossings nearer the arc's entry first.
    pub depth: (i64, i64),
    pub turn: Vec<Occ>,
}

fn rotate_to(m: &DiscModel, w: &CurveWord, p: Passage) -> Vec<Occ> {
    let ps = passages(m, w);
    let r = ps.iter().position(|q| *q == p).expect("loop passage");
    let l = w.len();
    (0..l).map(|t| w.exits[(r + t) % l]).collect()
}

/// Intersections of an arc with a loop in minimal position.
///
/// Two passages through the same disc with four distinct ends cross when
/// their ends interleave. Passages sharing a side start a parallel run; the
/// run crosses when the two curves swap sides between its ends, and the
/// crossing is placed just before the shared side.
pub fn arc_loop_crossings(m: &DiscModel, arc: &CurveWord, band: &CurveWord) -> Vec<Crossing> {
    let rev = band.reversed(m);
    let a = passages(m, arc);
    let mut out = Vec::new();
    let orient = |pl: Passage, loop_: &CurveWord, other: &CurveWord, ahead: bool| {
        // ahead: the loop's entry lies before the arc's exit seen from the arc's entry
        if ahead {
            rotate_to(m, loop_, pl)
        } else {
            let flipped = Passage {
                disc: pl.disc,
                from: pl.to,
                to: pl.from,
            };
            rotate_to(m, other, flipped)
        }
    };
    for (t, &pa) in a.iter().enumerate() {
        for &pl in passages(m, band).iter().filter(|q| q.disc == pa.disc) {
            let ends = [pa.from, pa.to, pl.from, pl.to];
            if ends.iter().collect::<BTreeSet<_>>().len() == 4 {
                let k_out = cw(m, pa.disc, pa.from, pa.to);
                let (kf, kt) = (cw(m, pa.disc, pa.from, pl.from), cw(m, pa.disc, pa.from, pl.to));
                if (kf < k_out) != (kt < k_out) {
                    out.push(Crossing {
                        passage: t,
                        depth: (2 * kf.min(kt), -kf.max(kt)),
                        turn: orient(pl, band, &rev, kf < k_out),
                    });
                }
            }
        }
        for (loop_, other) in [(band, &rev), (&rev, band)] {
            let lp = passages(m, loop_);
            for (r, &pl) in lp.iter().enumerate() {
                if pl.disc != pa.disc || pl.to != pa.to || pl.from == pa.from || t + 1 == a.len() {
                    continue;
                }
                // follow the run to where the two curves part
                let mut s = 1;
                while t + s < a.len() && a[t + s] == lp[(r + s) % lp.len()] {
                    s += 1;
                }
                if t + s == a.len() {
                    continue;
                }
                let (ea, el) = (a[t + s], lp[(r + s) % lp.len()]);
                let before = cw(m, pa.disc, pa.to, pa.from) < cw(m, pa.disc, pa.to, pl.from);
                let after = cw(m, ea.disc, ea.from, ea.to) < cw(m, ea.disc, ea.from, el.to);
                if before == after {
                    let (k_in, k_out) = (cw(m, pa.disc, pa.from, pl.from), cw(m, pa.disc, pa.from, pa.to));
                    let ahead = k_in < k_out;
                    out.push(Crossing {
                        passage: t,
                        depth: if ahead { (2 * k_in, -k_out) } else { (2 * k_out - 1, -k_in) },
                        turn: orient(pl, loop_, other, ahead),
                    });
                }
            }
        }
    }
    out.sort_by_key(|c| (c.passage, c.depth));
    out
}

/// Where two curves meet: the marked point of a disc, or an interior
/// crossing of an arc with a loop, numbered as in [`arc_loop_crossings`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingDatum {
    MarkedPoint(usize),
    Interior(usize),
}

/// Smooth one intersection. At a marked point the two arcs are joined into
/// one; at an interior crossing the arc absorbs one turn of the loop.
pub fn resolve_crossing(
    m: &DiscModel,
    a: &GradedCurve,
    b: &GradedCurve,
    datum: CrossingDatum,
) -> Result<Vec<GradedCurve>, WordError> {
    match datum {
        CrossingDatum::MarkedPoint(disc) => Ok(vec![resolve_at_marked_point(m, a, b, disc)?.0]),
        CrossingDatum::Interior(k) => {
            let (arc, band) = match (a.word.shape, b.word.shape) {
                (Shape::Arc, Shape::Band) => (a, &b.word),
                (Shape::Band, Shape::Arc) => (b, &a.word),
                _ => return Err(WordError::WrongShape("arc and band")),
            };
            let crossings = arc_loop_crossings(m, &arc.word, band);
            let c = crossings
                .get(k)
                .ok_or(WordError::WrongShape("crossing of the arc with the loop"))?;
            Ok(vec![splice(m, arc, std::slice::from_ref(c))])
        }
    }
}

fn splice(m: &DiscModel, arc: &GradedCurve, crossings: &[Crossing]) -> GradedCurve {
    let mut raw: Vec<Occ> = Vec::new();
    let mut anchor = 0;
    let mut next = crossings.iter().peekable();
    for t in 0..=arc.word.len() {
        while let Some(c) = next.next_if(|c| c.passage == t) {
            raw.extend_from_slice(&c.turn);
        }
        if t < arc.word.len() {
            if t == 0 {
                anchor = raw.len();
            }
            raw.push(arc.word.exits[t]);
        }
    }
    reduce_graded_path(m, &raw, &HashMap::new(), anchor, arc.grading.degrees[0])
}

/// Right-handed Dehn twist of a graded arc along a loop: a copy of the loop
/// is spliced in at every crossing and the result reduced. The first
/// crossing of the arc keeps its degree.
pub fn dehn_twist(m: &DiscModel, arc: &GradedCurve, band: &CurveWord) -> Result<GradedCurve, WordError> {
    if arc.word.is_band() || !band.is_band() {
        return Err(WordError::WrongShape("arc and band"));
    }
    Ok(splice(m, arc, &arc_loop_crossings(m, &arc.word, band)))
}

fn format_rational(q: &Rational64) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Text notation: `arc: x -[u,>]- y @ (D0, 1) .. (D2, 0)` or
/// `band(λ): x -[u,>]- y -[v,<]-`.
pub fn word_to_text(
    p: &GentlePresentation,
    m: &DiscModel,
    w: &CurveWord,
    lambda: Option<&Rational64>,
) -> String {
    let xs = w.crossings(m);
    let gaps = w.gaps(m);
    let mut s = match w.shape {
        Shape::Arc => "arc: ".to_string(),
        Shape::Band => format!(
            "band({}): ",
            format_rational(lambda.unwrap_or(&Rational64::from_integer(1)))
        ),
    };
    for (i, &x) in xs.iter().enumerate() {
        s.push_str(p.vertex_name(x));
        if let Some(g) = gaps.get(i) {
            let path = p.path_ids(&g.path(p, m)).join(".");
            s.push_str(&format!(" -[{},{}]- ", path, if g.is_forward() { '>' } else { '<' }));
        }
    }
    let s = s.trim_end().to_string();
    if w.is_band() {
        return s;
    }
    let first = w.exits[0];
    let last = m.partner(*w.exits.last().unwrap());
    format!(
        "{s} @ ({}, {}) .. ({}, {})",
        m.disc_name(first.disc),
        first.pos,
        m.disc_name(last.disc),
        last.pos
    )
}

/// Parse the text notation back into a word and its band parameter.
pub fn parse_word(
    p: &GentlePresentation,
    m: &DiscModel,
    text: &str,
) -> Result<(CurveWord, Option<Rational64>), WordError> {
    let text = text.trim();
    let syn = |s: &str| WordError::Syntax(s.to_string());
    let (shape, lambda, body) = if let Some(rest) = text.strip_prefix("arc:") {
        (Shape::Arc, None, rest)
    } else if let Some(rest) = text.strip_prefix("band(") {
        let close = rest.find("):").ok_or_else(|| syn("expected `band(λ):`"))?;
        let lam = parse_rational(&rest[..close]).ok_or_else(|| syn("bad band parameter"))?;
        (Shape::Band, Some(lam), &rest[close + 2..])
    } else {
        return Err(syn("expected `arc:` or `band(λ):`"));
    };
    let (chain, ends) = match body.split_once('@') {
        Some((c, e)) => (c, Some(e)),
        None => (body, None),
    };
    // alternate crossing names and gap brackets
    let mut xs: Vec<usize> = Vec::new();
    let mut gaps: Vec<(Vec<usize>, bool)> = Vec::new();
    let mut rest = chain.trim();
    loop {
        let (name, after) = match rest.find("-[") {
            Some(i) => (rest[..i].trim(), Some(&rest[i + 2..])),
            None => (rest.trim(), None),
        };
        if !name.is_empty() {
            let v = p
                .quiver
                .vertex_index(name)
                .ok_or_else(|| WordError::UnknownVertex(name.to_string()))?;
            xs.push(v);
        }
        let Some(after) = after else { break };
        let close = after.find("]-").ok_or_else(|| syn("unclosed gap"))?;
        let inner = &after[..close];
        let (path, dir) = inner.rsplit_once(',').ok_or_else(|| syn("gap needs `path,dir`"))?;
        let arrows = path
            .trim()
            .split('.')
            .map(|a| {
                p.quiver
                    .arrow_index(a.trim())
                    .ok_or_else(|| syn(&format!("unknown arrow `{a}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let forward = match dir.trim() {
            ">" => true,
            "<" => false,
            _ => return Err(syn("direction must be `>` or `<`")),
        };
        gaps.push((arrows, forward));
        rest = after[close + 2..].trim();
    }
    let l = xs.len();
    if l == 0 {
        return Err(WordError::Empty);
    }
    let expected_gaps = if shape == Shape::Arc { l - 1 } else { l };
    if gaps.len() != expected_gaps {
        return Err(syn("gap count does not match the crossings"));
    }
    // locate each gap inside the thread of its disc
    let mut placed: Vec<(Occ, Occ)> = Vec::new();
    for (i, (arrows, forward)) in gaps.iter().enumerate() {
        let disc = m
            .discs
            .iter()
            .position(|d| d.thread.arrows.contains(&arrows[0]))
            .ok_or_else(|| syn("gap path is empty"))?;
        let th = &m.discs[disc].thread.arrows;
        let lo = th.iter().position(|&a| a == arrows[0]).unwrap();
        let hi = lo + arrows.len();
        if hi > th.len() || th[lo..hi] != arrows[..] {
            return Err(WordError::BadGap {
                index: i,
                message: "path is not a subpath of a thread".into(),
            });
        }
        let (from, to) = if *forward { (lo, hi) } else { (hi, lo) };
        let from = Occ { disc, pos: from };
        let to = Occ { disc, pos: to };
        if m.vertex(from) != xs[i] || m.vertex(to) != xs[(i + 1) % l] {
            return Err(WordError::BadGap {
                index: i,
                message: "path does not join the named laminates".into(),
            });
        }
        placed.push((from, to));
    }
    let parse_end = |s: &str| -> Result<Occ, WordError> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (d, pos) = s.split_once(',').ok_or_else(|| syn("endpoint needs `(disc, side)`"))?;
        let disc: usize = d
            .trim()
            .trim_start_matches('D')
            .parse()
            .map_err(|_| WordError::UnknownDisc(d.trim().to_string()))?;
        let pos: usize = pos.trim().parse().map_err(|_| syn("bad side index"))?;
        if disc >= m.discs.len() || pos >= m.disc_len(disc) {
            return Err(WordError::UnknownDisc(format!("({disc}, {pos})")));
        }
        Ok(Occ { disc, pos })
    };
    let mut exits = vec![Occ { disc: 0, pos: 0 }; l];
    for (i, (from, to)) in placed.iter().enumerate() {
        exits[(i + 1) % l] = *to;
        if shape == Shape::Arc && i == 0 {
            exits[0] = m.partner(*from);
        }
    }
    if shape == Shape::Arc {
        let ends = match ends {
            Some(e) => {
                let (a, b) = e.split_once("..").ok_or_else(|| syn("endpoints need `..`"))?;
                Some((parse_end(a)?, parse_end(b)?))
            }
            None => None,
        };
        if l == 1 {
            // Without endpoints, the arc runs from the lower side of the laminate.
            let (start, end) = ends.unwrap_or_else(|| {
                let [a, b] = m.sides[xs[0]];
                (a, b)
            });
            if m.vertex(start) != xs[0] || m.partner(start) != end {
                return Err(syn("endpoints do not match the crossing"));
            }
            exits[0] = start;
        } else if let Some((start, end)) = ends {
            if start != exits[0] || end != m.partner(exits[l - 1]) {
                return Err(syn("endpoints do not match the gaps"));
            }
        }
    } else {
        for (i, (from, _)) in placed.iter().enumerate() {
            if m.partner(exits[i]) != *from {
                return Err(WordError::BadGap {
                    index: i,
                    message: "consecutive gaps do not meet across a laminate".into(),
                });
            }
        }
    }
    let w = CurveWord { shape, exits };
    Ok((w, lambda))
}

pub fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let d: i64 = b.trim().parse().ok()?;
            let n: i64 = a.trim().parse().ok()?;
            (d != 0).then(|| Rational64::new(n, d))
        }
        None => Some(Rational64::from_integer(s.parse().ok()?)),
    }
}

/// A random reduced arc with at most `max_len` crossings.
pub fn random_arc<R: Rng>(rng: &mut R, m: &DiscModel, max_len: usize) -> CurveWord {
    let d = rng.gen_range(0..m.discs.len());
    let mut exits = vec![Occ {
        disc: d,
        pos: rng.gen_range(0..m.disc_len(d)),
    }];
    let target = rng.gen_range(1..=max_len.max(1));
    while exits.len() < target {
        let entry = m.partner(*exits.last().unwrap());
        let k = m.disc_len(entry.disc);
        if k == 1 {
            break;
        }
        let mut pos = rng.gen_range(0..k - 1);
        if pos >= entry.pos {
            pos += 1;
        }
        exits.push(Occ {
            disc: entry.disc,
            pos,
        });
    }
    CurveWord::arc(exits)
}

/// A random gradable primitive band with at most `max_len` crossings, if
/// one turns up within the given number of attempts.
pub fn random_band<R: Rng>(
    rng: &mut R,
    m: &DiscModel,
    max_len: usize,
    attempts: usize,
) -> Option<CurveWord> {
    for _ in 0..attempts {
        let w = random_arc(rng, m, max_len);
        if w.len() < 2 {
            continue;
        }
        let entry = m.partner(*w.exits.last().unwrap());
        let first = w.exits[0];
        if entry.disc != first.disc || entry.pos == first.pos {
            continue;
        }
        let b = CurveWord::band(w.exits);
        if b.is_primitive() && winding_number(m, &b) == 0 {
            return Some(b);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named;
    use crate::surface::build_disc_model;

    fn occ(disc: usize, pos: usize) -> Occ {
        Occ { disc, pos }
    }

    /// Kronecker discs: D0 = thread a = [x, y], D1 = thread b = [x, y].
    fn kronecker() -> (GentlePresentation, DiscModel) {
        let p = named::kronecker();
        let m = build_disc_model(&p).unwrap();
        assert_eq!(m.discs[0].thread.arrows, vec![0]);
        (p, m)
    }

    #[test]
    fn dual_arc_is_valid_and_flat() {
        let (p, m) = kronecker();
        let w = CurveWord::dual_arc(&m, 0);
        assert!(validate_word(&p, &m, &w).is_empty());
        assert_eq!(grade_word(&m, &w, 0).unwrap().degrees, vec![0]);
    }

    #[test]
    fn kronecker_band() {
        let (p, m) = kronecker();
        let band = CurveWord::band(vec![occ(0, 0), occ(1, 1)]);
        assert!(validate_word(&p, &m, &band).is_empty());
        let gaps = band.gaps(&m);
        assert!(gaps[0].is_forward());
        assert!(!gaps[1].is_forward());
        assert_eq!(winding_number(&m, &band), 0);
        assert_eq!(winding_number(&m, &band.reversed(&m)), 0);
        assert_eq!(grade_word(&m, &band, 0).unwrap().degrees, vec![0, 1]);
    }

    #[test]
    fn ungradable_band_reported() {
        // the loop around the puncture of the dual numbers
        let p = named::dual_numbers();
        let m = build_disc_model(&p).unwrap();
        let band = CurveWord::band(vec![occ(0, 1)]);
        assert_eq!(winding_number(&m, &band), 1);
        assert_eq!(winding_number(&m, &band.reversed(&m)), -1);
        assert_eq!(validate_word(&p, &m, &band), vec![WordError::Ungradable(1)]);
        assert!(grade_word(&m, &band, 0).is_err());
    }

    #[test]
    fn forward_gap_raises_degree() {
        let p = named::a2();
        let m = build_disc_model(&p).unwrap();
        let segs = boundary_segments(&m);
        let two = segs.iter().find(|s| s.len() == 2).unwrap();
        let g = grade_word(&m, two, 0).unwrap();
        assert_eq!(g.degrees, vec![0, 1]);
        assert_eq!(grade_word(&m, two, 5).unwrap().degrees, vec![5, 6]);
    }

    #[test]
    fn canonical_is_idempotent_and_orientation_free() {
        let (_, m) = kronecker();
        let band = CurveWord::band(vec![occ(1, 1), occ(0, 0)]);
        let c = band.canonical(&m);
        assert_eq!(c.canonical(&m), c);
        assert_eq!(band.reversed(&m).canonical(&m), c);
    }

    #[test]
    fn imprimitive_band() {
        let (p, m) = kronecker();
        let sq = CurveWord::band(vec![occ(0, 0), occ(1, 1), occ(0, 0), occ(1, 1)]);
        assert!(validate_word(&p, &m, &sq).contains(&WordError::Imprimitive));
    }

    #[test]
    fn text_round_trip() {
        for (_, p) in named::all() {
            let m = build_disc_model(&p).unwrap();
            let mut rng = rand::thread_rng();
            for _ in 0..20 {
                let w = random_arc(&mut rng, &m, 5);
                let t = word_to_text(&p, &m, &w, None);
                let (back, _) = parse_word(&p, &m, &t).unwrap();
                assert_eq!(back, w, "{t}");
            }
            if let Some(b) = random_band(&mut rng, &m, 6, 200) {
                let lam = Rational64::new(-3, 2);
                let t = word_to_text(&p, &m, &b, Some(&lam));
                let (back, l) = parse_word(&p, &m, &t).unwrap();
                assert_eq!(back, b, "{t}");
                assert_eq!(l, Some(lam));
            }
        }
    }

    #[test]
    fn tau_orbit_of_a2_has_period_three() {
        let p = named::a2();
        let m = build_disc_model(&p).unwrap();
        let start = graded(&m, CurveWord::dual_arc(&m, 0), 0).unwrap();
        let mut cur = start.clone();
        let mut words = vec![cur.word.canonical(&m)];
        for _ in 0..3 {
            cur = tau_translate(&m, &cur).unwrap();
            words.push(cur.word.canonical(&m));
        }
        assert_ne!(words[1], words[0]);
        assert_ne!(words[2], words[0]);
        assert_eq!(words[3], words[0]);
    }

    #[test]
    fn boundary_loops_of_kronecker() {
        let (_, m) = kronecker();
        let loops = boundary_loops(&m);
        assert_eq!(loops.len(), 2);
        for (_, l) in &loops {
            assert_eq!(winding_number(&m, l), 0);
        }
        // both boundary components are parallel to the same core loop
        assert_eq!(loops[0].1.canonical(&m), loops[1].1.canonical(&m));
    }

    #[test]
    fn disc_boundary_has_no_loop() {
        let m = build_disc_model(&named::a3_linear()).unwrap();
        assert!(boundary_loops(&m).is_empty());
    }

    #[test]
    fn resolution_at_marked_point_in_a2() {
        let p = named::a2();
        let m = build_disc_model(&p).unwrap();
        // the two dual arcs both end at the marked point of the disc of `a`
        let x1 = graded(&m, CurveWord::arc(vec![m.sides[0][0]]), 0).unwrap();
        let x2 = graded(&m, CurveWord::arc(vec![m.sides[1][0]]), 0).unwrap();
        let disc = m.discs.iter().position(|d| d.len() == 2).unwrap();
        let (r, _) = resolve_at_marked_point(&m, &x1, &x2, disc).unwrap();
        assert_eq!(r.word.len(), 2);
        assert!(r.is_consistent(&m));
    }

    #[test]
    fn kronecker_dual_arcs_cross_the_band_once() {
        let (_, m) = kronecker();
        let (_, band) = boundary_loops(&m).into_iter().next().unwrap();
        for v in 0..2 {
            let cs = arc_loop_crossings(&m, &CurveWord::dual_arc(&m, v), &band);
            assert_eq!(cs.len(), 1, "vertex {v}");
            assert_eq!(cs[0].turn.len(), band.len());
        }
    }

    #[test]
    fn interior_resolution_is_the_single_crossing_twist() {
        let (_, m) = kronecker();
        let (_, band) = boundary_loops(&m).into_iter().next().unwrap();
        let b = graded(&m, band.clone(), 0).unwrap();
        let a = graded(&m, CurveWord::dual_arc(&m, 1), 0).unwrap();
        let r = resolve_crossing(&m, &a, &b, CrossingDatum::Interior(0)).unwrap();
        assert_eq!(r, vec![dehn_twist(&m, &a, &band).unwrap()]);
        assert!(r[0].is_consistent(&m));
        assert_eq!(r[0].word.len(), 3);
        assert!(resolve_crossing(&m, &a, &b, CrossingDatum::Interior(1)).is_err());
    }

    #[test]
    fn marked_point_resolution_matches_direct_call() {
        let p = named::a3_linear();
        let m = build_disc_model(&p).unwrap();
        let a = graded(&m, CurveWord::dual_arc(&m, 0), 0).unwrap();
        let b = graded(&m, CurveWord::dual_arc(&m, 1), 0).unwrap();
        let disc = [a.word.start_disc(), a.word.end_disc(&m)]
            .into_iter()
            .find(|d| [b.word.start_disc(), b.word.end_disc(&m)].contains(d))
            .unwrap();
        let direct = resolve_at_marked_point(&m, &a, &b, disc).unwrap().0;
        let via = resolve_crossing(&m, &a, &b, CrossingDatum::MarkedPoint(disc)).unwrap();
        assert_eq!(via, vec![direct]);
    }

    #[test]
    fn single_crossing_text_defaults_to_the_dual_arc() {
        let (p, m) = kronecker();
        let (w, _) = parse_word(&p, &m, "arc: y").unwrap();
        assert_eq!(w, CurveWord::dual_arc(&m, 1));
    }
}
