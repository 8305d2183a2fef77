//! Arc systems, the geometric tilting test and the gentle presentation of
//! the endomorphism algebra read off from boundary contacts.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::curves::{graded, reverse_path, validate_word, CurveWord, GradedCurve, Grading};
use crate::error::TiltingError;
use crate::homalg::Oracle;
use crate::objects::string_complex;
use crate::presentation::{find_isomorphism, validate_gentle, Arrow, GentlePresentation, Quiver};
use crate::surface::{build_disc_model, DiscModel, Occ};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcSystem {
    pub arcs: Vec<CurveWord>,
}

/// One end of an arc: `end` is 0 for the start of the stored word and 1 for
/// its end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArcEnd {
    pub arc: usize,
    pub end: usize,
}

/// Two arc ends that are neighbours at a marked point, the first one
/// preceding the second clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Contact {
    pub disc: usize,
    pub from: ArcEnd,
    pub to: ArcEnd,
}

impl ArcSystem {
    /// The arcs dual to the laminates, in vertex order.
    pub fn dual(m: &DiscModel) -> Self {
        ArcSystem {
            arcs: (0..m.sides.len()).map(|v| CurveWord::dual_arc(m, v)).collect(),
        }
    }

    /// Each arc turned to start at the given end.
    fn oriented(&self, m: &DiscModel, e: ArcEnd) -> Vec<Occ> {
        let w = &self.arcs[e.arc];
        if e.end == 0 {
            w.exits.clone()
        } else {
            reverse_path(m, &w.exits)
        }
    }

    /// Ends at every marked point, in clockwise order.
    pub fn ends_by_disc(&self, m: &DiscModel) -> BTreeMap<usize, Vec<ArcEnd>> {
        let mut out: BTreeMap<usize, Vec<(ArcEnd, Vec<Occ>)>> = BTreeMap::new();
        for arc in 0..self.arcs.len() {
            for end in 0..2 {
                let e = ArcEnd { arc, end };
                let o = self.oriented(m, e);
                out.entry(o[0].disc).or_default().push((e, o));
            }
        }
        out.into_iter()
            .map(|(d, mut v)| {
                v.sort_by(|a, b| angular_cmp(m, &a.1, &b.1).then(a.0.cmp(&b.0)));
                (d, v.into_iter().map(|(e, _)| e).collect())
            })
            .collect()
    }

    pub fn contacts(&self, m: &DiscModel) -> Vec<Contact> {
        self.ends_by_disc(m)
            .into_iter()
            .flat_map(|(disc, ends)| {
                ends.windows(2)
                    .map(|w| Contact {
                        disc,
                        from: w[0],
                        to: w[1],
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    }
}

/// Clockwise comparison of two arcs leaving the same marked point.
///
/// Arcs leaving through different sides are ordered by side. Arcs that run
/// together are separated where they first part: inside a disc entered
/// through side `j`, the one leaving earlier in the clockwise order that
/// starts just after `j` comes first, an arc ending at the marked point
/// counting as leaving through it.
fn angular_cmp(m: &DiscModel, a: &[Occ], b: &[Occ]) -> Ordering {
    if a[0].pos != b[0].pos {
        return a[0].pos.cmp(&b[0].pos);
    }
    for t in 1.. {
        let entry = m.partner(a[t - 1]);
        let k = m.disc_len(entry.disc) as i64;
        let key = |w: &[Occ]| {
            let v = w.get(t).map_or(2 * k - 1, |o| 2 * o.pos as i64);
            (v - 2 * entry.pos as i64 - 1).rem_euclid(2 * k)
        };
        match key(a).cmp(&key(b)) {
            Ordering::Equal if t >= a.len() || t >= b.len() => return Ordering::Equal,
            Ordering::Equal => continue,
            other => return other,
        }
    }
    unreachable!()
}

/// Crossing degree of a graded arc next to one of its ends.
fn end_degree(g: &GradedCurve, end: usize) -> i64 {
    if end == 0 {
        g.grading.degrees[0]
    } else {
        *g.grading.degrees.last().unwrap()
    }
}

/// Check the tilting conditions and return the arcs graded so that all
/// morphisms between them sit in degree zero.
pub fn check_tilting(
    p: &GentlePresentation,
    m: &DiscModel,
    s: &ArcSystem,
) -> Result<Vec<GradedCurve>, TiltingError> {
    let fail = |msg: String| Err(TiltingError::NotTilting(msg));
    for (i, w) in s.arcs.iter().enumerate() {
        if w.is_band() {
            return fail(format!("curve {i} is a band"));
        }
        if let Some(e) = validate_word(p, m, w).into_iter().next() {
            return Err(e.into());
        }
    }
    let canon: Vec<CurveWord> = s.arcs.iter().map(|w| w.canonical(m)).collect();
    if canon.iter().collect::<BTreeSet<_>>().len() != canon.len() {
        return fail("two arcs are homotopic".into());
    }
    // degree shifts by breadth-first search over the contacts
    let base: Vec<GradedCurve> = s
        .arcs
        .iter()
        .map(|w| graded(m, w.clone(), 0).expect("arcs are gradable"))
        .collect();
    let contacts = s.contacts(m);
    let n = s.arcs.len();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for c in &contacts {
        let delta = end_degree(&base[c.from.arc], c.from.end) - end_degree(&base[c.to.arc], c.to.end);
        adj[c.from.arc].push((c.to.arc, delta));
        adj[c.to.arc].push((c.from.arc, -delta));
    }
    let mut shift: Vec<Option<i64>> = vec![None; n];
    for root in 0..n {
        if shift[root].is_some() {
            continue;
        }
        shift[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            let sa = shift[a].unwrap();
            for &(b, delta) in &adj[a] {
                match shift[b] {
                    None => {
                        shift[b] = Some(sa + delta);
                        queue.push_back(b);
                    }
                    Some(sb) if sb != sa + delta => {
                        return fail("a cycle of boundary contacts has nonzero winding".into());
                    }
                    _ => {}
                }
            }
        }
    }
    let arcs: Vec<GradedCurve> = base
        .iter()
        .zip(&shift)
        .map(|(g, s)| g.shifted(s.unwrap()))
        .collect();
    let oracle = Oracle::new(p);
    let complexes: Vec<_> = arcs
        .iter()
        .map(|g| string_complex(p, m, g))
        .collect::<Result<_, _>>()?;
    for (i, x) in complexes.iter().enumerate() {
        for (j, y) in complexes.iter().enumerate() {
            let prof = oracle.hom_profile(x, y);
            if prof.total() != prof.get(0) {
                return fail(format!("arcs {i} and {j} have morphisms outside degree zero"));
            }
        }
    }
    if !generates(m, &s.arcs) {
        return fail("the arcs do not generate every dual arc".into());
    }
    Ok(arcs)
}

/// Closure of the arcs under resolving and un-resolving intersections at
/// shared marked points, with a length cap, must contain every dual arc.
fn generates(m: &DiscModel, arcs: &[CurveWord]) -> bool {
    let cap = 2 * arcs.iter().map(|w| w.len()).max().unwrap_or(1).max(1);
    let mut set: BTreeSet<CurveWord> = arcs.iter().map(|w| w.canonical(m)).collect();
    let targets: Vec<CurveWord> = (0..m.sides.len())
        .map(|v| CurveWord::dual_arc(m, v).canonical(m))
        .collect();
    loop {
        if targets.iter().all(|t| set.contains(t)) {
            return true;
        }
        let oriented: Vec<Vec<Occ>> = set
            .iter()
            .flat_map(|w| [w.exits.clone(), reverse_path(m, &w.exits)])
            .collect();
        let mut fresh = BTreeSet::new();
        for a in &oriented {
            let ra = reverse_path(m, a);
            for c in &oriented {
                // c = rev(a) · b gives b
                if c.len() > ra.len() && c[..ra.len()] == ra[..] {
                    fresh.insert(CurveWord::arc(c[ra.len()..].to_vec()).canonical(m));
                }
                // a and c leaving the same marked point give rev(a) · c
                if c[0].disc == a[0].disc && c[0].pos != a[0].pos && a.len() + c.len() <= cap {
                    let mut w = ra.clone();
                    w.extend_from_slice(c);
                    fresh.insert(CurveWord::arc(w).canonical(m));
                }
            }
        }
        let before = set.len();
        set.extend(fresh);
        if set.len() == before {
            return false;
        }
    }
}

/// Quiver with relations of the endomorphism algebra of a tilting arc
/// system: one vertex per arc, one arrow per pair of neighbouring ends at
/// a marked point, and a relation wherever two arrows meet the middle arc
/// at different ends.
pub fn endo_presentation(
    p: &GentlePresentation,
    m: &DiscModel,
    s: &ArcSystem,
) -> Result<GentlePresentation, TiltingError> {
    check_tilting(p, m, s)?;
    Ok(endo_unchecked(p, m, s))
}

fn endo_unchecked(p: &GentlePresentation, m: &DiscModel, s: &ArcSystem) -> GentlePresentation {
    let names: Vec<String> = s
        .arcs
        .iter()
        .enumerate()
        .map(|(i, w)| {
            if w.len() == 1 {
                p.vertex_name(m.vertex(w.exits[0])).to_string()
            } else {
                format!("T{i}")
            }
        })
        .collect();
    let contacts = s.contacts(m);
    let arrows: Vec<Arrow> = contacts
        .iter()
        .enumerate()
        .map(|(k, c)| Arrow {
            id: format!("c{k}"),
            source: c.from.arc,
            target: c.to.arc,
        })
        .collect();
    let mut relations = BTreeSet::new();
    for (i, a) in contacts.iter().enumerate() {
        for (j, b) in contacts.iter().enumerate() {
            if a.to.arc == b.from.arc && a.to != b.from {
                relations.insert((i, j));
            }
        }
    }
    GentlePresentation {
        quiver: Quiver {
            vertices: names,
            arrows,
        },
        relations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundTrip {
    pub ok: bool,
    pub recovered: String,
    pub message: String,
}

/// Recover the presentation from its dual arcs and compare up to relabelling.
pub fn roundtrip_check(p: &GentlePresentation) -> RoundTrip {
    let m = match build_disc_model(p) {
        Ok(m) => m,
        Err(e) => {
            return RoundTrip {
                ok: false,
                recovered: String::new(),
                message: e.to_string(),
            }
        }
    };
    match endo_presentation(p, &m, &ArcSystem::dual(&m)) {
        Err(e) => RoundTrip {
            ok: false,
            recovered: String::new(),
            message: e.to_string(),
        },
        Ok(q) => {
            let valid = validate_gentle(&q).is_ok();
            let iso = find_isomorphism(p, &q).is_some();
            RoundTrip {
                ok: valid && iso,
                recovered: q.emit(),
                message: match (valid, iso) {
                    (true, true) => "isomorphic".into(),
                    (false, _) => "recovered presentation is not gentle".into(),
                    (true, false) => "recovered presentation is not isomorphic".into(),
                },
            }
        }
    }
}

/// Parse an arc system, one word per line.
pub fn parse_arc_system(
    p: &GentlePresentation,
    m: &DiscModel,
    text: &str,
) -> Result<ArcSystem, TiltingError> {
    let arcs = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| crate::curves::parse_word(p, m, l).map(|(w, _)| w))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ArcSystem { arcs })
}

/// Gradings forced by a tilting system, for display.
pub fn gradings(arcs: &[GradedCurve]) -> Vec<Grading> {
    arcs.iter().map(|g| g.grading.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named;
    use crate::presentation::path_basis;
    use crate::surface::derived_invariant;

    #[test]
    fn named_algebras_round_trip() {
        for (name, p) in named::all() {
            let r = roundtrip_check(&p);
            assert!(r.ok, "{name}: {}\n{}", r.message, r.recovered);
        }
    }

    #[test]
    fn endomorphism_dimension_matches_oracle() {
        for (name, p) in named::all() {
            let m = build_disc_model(&p).unwrap();
            let s = ArcSystem::dual(&m);
            let arcs = check_tilting(&p, &m, &s).unwrap();
            let o = Oracle::new(&p);
            let xs: Vec<_> = arcs.iter().map(|g| string_complex(&p, &m, g).unwrap()).collect();
            let total: usize = xs
                .iter()
                .flat_map(|x| xs.iter().map(|y| o.hom_profile(x, y).get(0)))
                .sum();
            let q = endo_presentation(&p, &m, &s).unwrap();
            assert_eq!(total, path_basis(&q).len(), "{name}");
            assert_eq!(derived_invariant(&q).unwrap(), derived_invariant(&p).unwrap());
        }
    }

    #[test]
    fn homotopic_arcs_are_rejected() {
        let p = named::a2();
        let m = build_disc_model(&p).unwrap();
        let w = CurveWord::dual_arc(&m, 0);
        let s = ArcSystem {
            arcs: vec![w.clone(), w.reversed(&m)],
        };
        let err = check_tilting(&p, &m, &s).unwrap_err();
        assert!(err.to_string().contains("homotopic"));
    }

    #[test]
    fn missing_arc_fails_generation() {
        let p = named::a3_linear();
        let m = build_disc_model(&p).unwrap();
        let s = ArcSystem {
            arcs: vec![CurveWord::dual_arc(&m, 0), CurveWord::dual_arc(&m, 1)],
        };
        let err = check_tilting(&p, &m, &s).unwrap_err();
        assert!(err.to_string().contains("generate"), "{err}");
    }

    #[test]
    fn boundary_segments_of_a2_tilt_to_a2() {
        // the two boundary segments at a shared marked point of the disc
        let p = named::a2();
        let m = build_disc_model(&p).unwrap();
        let segs = crate::curves::boundary_segments(&m);
        let short: Vec<CurveWord> = segs.into_iter().filter(|s| s.len() == 1).collect();
        let s = ArcSystem { arcs: short };
        let q = endo_presentation(&p, &m, &s).unwrap();
        assert!(find_isomorphism(&p, &q).is_some(), "{}", q.emit());
    }
}
