//! The disc model of the marked surface of a gentle algebra, its boundary
//! components with marked points and winding numbers, and the derived
//! invariant built from them.
//!
//! Every permitted thread `a1 ... an` gives a disc whose boundary meets the
//! laminates `L_s(a1), ..., L_s(an), L_t(an)` in this cyclic order, with the
//! single marked point of the disc between the last and the first laminate.
//! Positions along a disc are numbered from 0. The boundary piece `i` of a
//! disc with `k` laminates is the piece just before position `i`, so piece 0
//! is the one carrying the marked point.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::{find_isomorphism, threads, GentlePresentation, Path, Thread};

/// One side of a laminate as seen from a disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Occ {
    pub disc: usize,
    pub pos: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disc {
    pub thread: Thread,
    pub laminates: Vec<usize>,
}

impl Disc {
    pub fn len(&self) -> usize {
        self.laminates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.laminates.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscModel {
    pub discs: Vec<Disc>,
    /// The two disc occurrences of every laminate, in increasing order.
    pub sides: Vec<[Occ; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("laminate {vertex} is met {count} times by the discs instead of twice")]
    Inconsistent { vertex: String, count: usize },
    #[error("boundary walk starting at disc {disc} does not close")]
    OpenWalk { disc: usize },
}

pub fn build_disc_model(p: &GentlePresentation) -> Result<DiscModel, SurfaceError> {
    let t = threads(p);
    let discs: Vec<Disc> = t
        .permitted
        .into_iter()
        .map(|th| Disc {
            laminates: th.vertices(&p.quiver),
            thread: th,
        })
        .collect();
    let mut seen: Vec<Vec<Occ>> = vec![Vec::new(); p.num_vertices()];
    for (d, disc) in discs.iter().enumerate() {
        for (pos, &v) in disc.laminates.iter().enumerate() {
            seen[v].push(Occ { disc: d, pos });
        }
    }
    let mut sides = Vec::with_capacity(seen.len());
    for (v, occs) in seen.into_iter().enumerate() {
        if occs.len() != 2 {
            return Err(SurfaceError::Inconsistent {
                vertex: p.vertex_name(v).to_string(),
                count: occs.len(),
            });
        }
        sides.push([occs[0], occs[1]]);
    }
    Ok(DiscModel { discs, sides })
}

impl DiscModel {
    pub fn disc_len(&self, d: usize) -> usize {
        self.discs[d].len()
    }

    pub fn vertex(&self, o: Occ) -> usize {
        self.discs[o.disc].laminates[o.pos]
    }

    /// The other side of the laminate at `o`.
    pub fn partner(&self, o: Occ) -> Occ {
        let [x, y] = self.sides[self.vertex(o)];
        if x == o {
            y
        } else {
            debug_assert_eq!(y, o);
            x
        }
    }

    /// Subpath of the disc's thread between positions `i <= j`.
    pub fn thread_path(&self, p: &GentlePresentation, disc: usize, i: usize, j: usize) -> Path {
        assert!(i <= j);
        let d = &self.discs[disc];
        if i == j {
            return Path::trivial(d.laminates[i]);
        }
        p.path(&d.thread.arrows[i..j]).expect("thread subpath composes")
    }

    /// Every occurrence in a fixed order.
    pub fn occurrences(&self) -> Vec<Occ> {
        (0..self.discs.len())
            .flat_map(|d| (0..self.disc_len(d)).map(move |pos| Occ { disc: d, pos }))
            .collect()
    }

    pub fn disc_name(&self, d: usize) -> String {
        format!("D{d}")
    }

    /// The piece reached after crossing out of `piece` of `disc`.
    pub fn next_piece(&self, disc: usize, piece: usize) -> (usize, usize) {
        let k = self.disc_len(disc);
        let o = self.partner(Occ { disc, pos: piece % k });
        (o.disc, (o.pos + 1) % self.disc_len(o.disc))
    }

    /// The boundary path from the marked point of `disc` to the next marked
    /// point along the boundary walk, as the sequence of laminate sides it
    /// leaves discs through.
    pub fn boundary_segment(&self, disc: usize) -> Vec<Occ> {
        let mut exits = vec![Occ { disc, pos: 0 }];
        loop {
            let entry = self.partner(*exits.last().unwrap());
            let next = (entry.pos + 1) % self.disc_len(entry.disc);
            if next == 0 {
                return exits;
            }
            exits.push(Occ {
                disc: entry.disc,
                pos: next,
            });
        }
    }

    /// Disc where a path of exits ends.
    pub fn end_disc(&self, exits: &[Occ]) -> usize {
        self.partner(*exits.last().expect("nonempty path")).disc
    }

    /// Deterministic DOT rendering of the disc adjacency ribbon graph.
    pub fn to_dot(&self, p: &GentlePresentation) -> String {
        let mut out = String::from("graph ribbon {\n  node [shape=circle];\n");
        for (d, disc) in self.discs.iter().enumerate() {
            let label = disc.laminates.iter().map(|&v| p.vertex_name(v)).join(",");
            out.push_str(&format!("  D{d} [label=\"D{d}\\n[{label}]\"];\n"));
        }
        for (v, [a, b]) in self.sides.iter().enumerate() {
            out.push_str(&format!(
                "  D{} -- D{} [label=\"{} ({}|{})\"];\n",
                a.disc,
                b.disc,
                p.vertex_name(v),
                a.pos,
                b.pos
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// A closed boundary walk: the pieces visited in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryWalk {
    pub pieces: Vec<(usize, usize)>,
    pub marked: usize,
    /// Whether the walk is read against its natural direction.
    pub reversed: bool,
}

impl BoundaryWalk {
    pub fn reverse(&self) -> BoundaryWalk {
        let mut pieces = self.pieces.clone();
        pieces.reverse();
        BoundaryWalk {
            pieces,
            marked: self.marked,
            reversed: !self.reversed,
        }
    }

    /// Discs whose marked point lies on this walk, in walk order.
    pub fn marked_discs(&self) -> Vec<usize> {
        self.pieces.iter().filter(|(_, i)| *i == 0).map(|(d, _)| *d).collect()
    }

    /// Laminate sides crossed when running parallel to the walk.
    pub fn loop_exits(&self, m: &DiscModel) -> Vec<Occ> {
        let exits: Vec<Occ> = self
            .pieces
            .iter()
            .map(|&(d, i)| Occ {
                disc: d,
                pos: i % m.disc_len(d),
            })
            .collect();
        if self.reversed {
            exits.iter().rev().map(|&o| m.partner(o)).collect()
        } else {
            exits
        }
    }
}

pub fn trace_boundary(m: &DiscModel) -> Result<Vec<BoundaryWalk>, SurfaceError> {
    let total: usize = (0..m.discs.len()).map(|d| m.disc_len(d)).sum();
    let mut seen = vec![vec![false; 0]; m.discs.len()];
    for (d, s) in seen.iter_mut().enumerate() {
        *s = vec![false; m.disc_len(d)];
    }
    let mut walks = Vec::new();
    for d in 0..m.discs.len() {
        for i in 0..m.disc_len(d) {
            if seen[d][i] {
                continue;
            }
            let mut pieces = Vec::new();
            let mut cur = (d, i);
            loop {
                if seen[cur.0][cur.1] {
                    if cur != (d, i) {
                        return Err(SurfaceError::OpenWalk { disc: d });
                    }
                    break;
                }
                if pieces.len() > total {
                    return Err(SurfaceError::OpenWalk { disc: d });
                }
                seen[cur.0][cur.1] = true;
                pieces.push(cur);
                cur = m.next_piece(cur.0, cur.1);
            }
            let marked = pieces.iter().filter(|(_, i)| *i == 0).count();
            walks.push(BoundaryWalk {
                pieces,
                marked,
                reversed: false,
            });
        }
    }
    Ok(walks)
}

/// Winding number of the boundary loop along a walk: each piece contributes
/// +1 when it carries its disc's marked point and -1 otherwise, so
/// `2 m - k` for `m` marked among `k` pieces.
pub fn boundary_winding(_m: &DiscModel, walk: &BoundaryWalk) -> i64 {
    let k = walk.pieces.len() as i64;
    let w = 2 * walk.marked as i64 - k;
    if walk.reversed {
        -w
    } else {
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryComponent {
    pub marked_count: usize,
    pub winding: i64,
    pub is_unmarked: bool,
}

impl BoundaryComponent {
    pub fn aag_pair(&self) -> (usize, i64) {
        (self.marked_count, self.marked_count as i64 - self.winding)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RibbonSurface {
    pub euler_characteristic: i64,
    pub boundary: Vec<BoundaryComponent>,
    pub genus: u64,
    pub punctures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DerivedInvariant {
    pub genus: u64,
    /// Sorted `(marked_count, winding)` pairs.
    pub components: Vec<(usize, i64)>,
}

pub fn ribbon_surface(p: &GentlePresentation) -> Result<RibbonSurface, SurfaceError> {
    let m = build_disc_model(p)?;
    let walks = trace_boundary(&m)?;
    let chi = p.num_vertices() as i64 - p.num_arrows() as i64;
    // genus is additive over connected components of the quiver
    let comp_of: Vec<usize> = {
        let mut c = vec![0; p.num_vertices()];
        for (i, comp) in p.quiver.components().iter().enumerate() {
            for &v in comp {
                c[v] = i;
            }
        }
        c
    };
    let ncomp = p.quiver.components().len();
    let mut per_chi = vec![0i64; ncomp];
    for v in 0..p.num_vertices() {
        per_chi[comp_of[v]] += 1;
    }
    for a in 0..p.num_arrows() {
        per_chi[comp_of[p.source(a)]] -= 1;
    }
    let mut per_b = vec![0i64; ncomp];
    for w in &walks {
        let (d, _) = w.pieces[0];
        per_b[comp_of[m.discs[d].laminates[0]]] += 1;
    }
    let mut genus = 0u64;
    for c in 0..ncomp {
        let twice = 2 - per_chi[c] - per_b[c];
        assert!(twice >= 0 && twice % 2 == 0, "genus not well defined");
        genus += (twice / 2) as u64;
    }
    let mut boundary: Vec<BoundaryComponent> = walks
        .iter()
        .map(|w| BoundaryComponent {
            marked_count: w.marked,
            winding: boundary_winding(&m, w),
            is_unmarked: w.marked == 0,
        })
        .collect();
    boundary.sort();
    let punctures = boundary.iter().filter(|b| b.is_unmarked).count();
    Ok(RibbonSurface {
        euler_characteristic: chi,
        boundary,
        genus,
        punctures,
    })
}

pub fn derived_invariant(p: &GentlePresentation) -> Result<DerivedInvariant, SurfaceError> {
    let s = ribbon_surface(p)?;
    Ok(s.invariant())
}

impl RibbonSurface {
    pub fn invariant(&self) -> DerivedInvariant {
        let mut components: Vec<(usize, i64)> =
            self.boundary.iter().map(|b| (b.marked_count, b.winding)).collect();
        components.sort();
        DerivedInvariant {
            genus: self.genus,
            components,
        }
    }

    pub fn aag_pairs(&self) -> Vec<(usize, i64)> {
        self.boundary.iter().map(|b| b.aag_pair()).sorted().collect()
    }

    pub fn report_json(&self) -> serde_json::Value {
        serde_json::json!({
            "chi": self.euler_characteristic,
            "genus": self.genus,
            "components": self.boundary.iter().map(|b| serde_json::json!({
                "marked": b.marked_count,
                "winding": b.winding,
            })).collect::<Vec<_>>(),
            "punctures": self.punctures,
            "aag_pairs": self.aag_pairs(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    InvariantsMatchUndecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equivalent => "Equivalent",
            Verdict::NotEquivalent => "NotEquivalent",
            Verdict::InvariantsMatchUndecided => "InvariantsMatchUndecided",
        })
    }
}

/// Why two invariants differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mismatch {
    Genus(u64, u64),
    Components {
        only_left: Vec<(usize, i64)>,
        only_right: Vec<(usize, i64)>,
    },
}

pub fn invariant_mismatch(a: &DerivedInvariant, b: &DerivedInvariant) -> Option<Mismatch> {
    if a.genus != b.genus {
        return Some(Mismatch::Genus(a.genus, b.genus));
    }
    let mut left: BTreeMap<(usize, i64), i64> = BTreeMap::new();
    for c in &a.components {
        *left.entry(*c).or_default() += 1;
    }
    for c in &b.components {
        *left.entry(*c).or_default() -= 1;
    }
    let mut only_left = Vec::new();
    let mut only_right = Vec::new();
    for (c, n) in left {
        for _ in 0..n.max(0) {
            only_left.push(c);
        }
        for _ in 0..(-n).max(0) {
            only_right.push(c);
        }
    }
    (!only_left.is_empty() || !only_right.is_empty()).then_some(Mismatch::Components {
        only_left,
        only_right,
    })
}

pub fn decide_with_witness(
    p: &GentlePresentation,
    q: &GentlePresentation,
) -> Result<(Verdict, Option<Mismatch>), SurfaceError> {
    let (a, b) = (derived_invariant(p)?, derived_invariant(q)?);
    if let Some(w) = invariant_mismatch(&a, &b) {
        return Ok((Verdict::NotEquivalent, Some(w)));
    }
    if a.genus == 0 || find_isomorphism(p, q).is_some() {
        return Ok((Verdict::Equivalent, None));
    }
    Ok((Verdict::InvariantsMatchUndecided, None))
}

pub fn decide_derived_equivalence(
    p: &GentlePresentation,
    q: &GentlePresentation,
) -> Result<Verdict, SurfaceError> {
    Ok(decide_with_witness(p, q)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named;

    #[test]
    fn disc_counts() {
        assert_eq!(build_disc_model(&named::a2()).unwrap().discs.len(), 3);
        assert_eq!(build_disc_model(&named::kronecker()).unwrap().discs.len(), 2);
        // a single thread through the loop, read twice by the same disc
        let d = build_disc_model(&named::dual_numbers()).unwrap();
        assert_eq!(d.discs.len(), 1);
        assert_eq!(d.discs[0].laminates, vec![0, 0]);
    }

    #[test]
    fn partner_is_an_involution() {
        for (_, p) in named::all() {
            let m = build_disc_model(&p).unwrap();
            for o in m.occurrences() {
                assert_ne!(m.partner(o), o);
                assert_eq!(m.partner(m.partner(o)), o);
            }
        }
    }

    #[test]
    fn kronecker_walks() {
        let m = build_disc_model(&named::kronecker()).unwrap();
        let walks = trace_boundary(&m).unwrap();
        assert_eq!(walks.len(), 2);
        for w in &walks {
            assert_eq!(w.marked, 1);
            assert_eq!(boundary_winding(&m, w), 0);
        }
    }

    #[test]
    fn a2_walk() {
        let m = build_disc_model(&named::a2()).unwrap();
        let walks = trace_boundary(&m).unwrap();
        assert_eq!(walks.len(), 1);
        assert_eq!(walks[0].marked, 3);
        assert_eq!(boundary_winding(&m, &walks[0]), 2);
        assert_eq!(boundary_winding(&m, &walks[0].reverse()), -2);
    }

    #[test]
    fn dual_numbers_walks() {
        let m = build_disc_model(&named::dual_numbers()).unwrap();
        let walks = trace_boundary(&m).unwrap();
        let mut data: Vec<(usize, i64)> =
            walks.iter().map(|w| (w.marked, boundary_winding(&m, w))).collect();
        data.sort();
        assert_eq!(data, vec![(0, -1), (1, 1)]);
    }

    #[test]
    fn walks_partition_pieces() {
        for (_, p) in named::all() {
            let m = build_disc_model(&p).unwrap();
            let walks = trace_boundary(&m).unwrap();
            let total: usize = walks.iter().map(|w| w.pieces.len()).sum();
            assert_eq!(total, 2 * p.num_vertices());
        }
    }

    #[test]
    fn invariants_of_named() {
        let k = derived_invariant(&named::kronecker()).unwrap();
        assert_eq!(k, DerivedInvariant { genus: 0, components: vec![(1, 0), (1, 0)] });
        let a2 = derived_invariant(&named::a2()).unwrap();
        assert_eq!(a2, DerivedInvariant { genus: 0, components: vec![(3, 2)] });
        let a3 = derived_invariant(&named::a3_linear()).unwrap();
        assert_eq!(a3, DerivedInvariant { genus: 0, components: vec![(4, 2)] });
        let s = ribbon_surface(&named::dual_numbers()).unwrap();
        assert_eq!(s.punctures, 1);
        assert_eq!(s.aag_pairs(), vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn aag_second_entries_sum_to_arrows() {
        for (_, p) in named::all() {
            let s = ribbon_surface(&p).unwrap();
            let sum: i64 = s.aag_pairs().iter().map(|x| x.1).sum();
            assert_eq!(sum, p.num_arrows() as i64);
        }
    }

    #[test]
    fn decisions() {
        let a3 = named::a3_orientations();
        for x in &a3 {
            for y in &a3 {
                assert_eq!(decide_derived_equivalence(x, y).unwrap(), Verdict::Equivalent);
            }
        }
        let (v, w) = decide_with_witness(&named::a2(), &named::dual_numbers()).unwrap();
        assert_eq!(v, Verdict::NotEquivalent);
        assert!(w.is_some());
    }

    #[test]
    fn boundary_segments_of_a2() {
        let p = named::a2();
        let m = build_disc_model(&p).unwrap();
        let segs: Vec<Vec<usize>> = (0..m.discs.len())
            .map(|d| m.boundary_segment(d).iter().map(|&o| m.vertex(o)).collect())
            .sorted()
            .collect();
        assert_eq!(segs, vec![vec![0], vec![0, 1], vec![1]]);
    }

    #[test]
    fn dot_is_deterministic() {
        let p = named::kronecker();
        let m = build_disc_model(&p).unwrap();
        assert_eq!(m.to_dot(&p), m.to_dot(&p));
        assert!(m.to_dot(&p).contains("D0 -- D1"));
    }
}
