//! Morphisms in the homotopy category by exact linear algebra.
//!
//! A degree `d` map `X -> Y` is a vector over the triples
//! `(i, j, u)` with `i` a term of `X`, `j` a term of `Y` in degree
//! `deg i + d`, and `u` a path from the vertex of `i` to the vertex of `j`.
//! The Hom complex differential is `D f = ∂_Y f - (-1)^d f ∂_X`, and
//! `dim Hom(X, Y[d])` is the cohomology of that complex in degree `d`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curves::{graded, resolve_at_marked_point, tau_translate, CurveWord, GradedCurve};
use crate::error::AlgebraError;
use crate::field::{big_to_rational64, rank, solve, FieldChoice, Fp, Field, SparseColumns, SpanBuilder};
use crate::objects::{string_complex, ComplexKind, Entry, ProjComplex, Term};
use crate::presentation::{GentlePresentation, Path, PathTable};
use crate::surface::DiscModel;

/// Source term, target term, path label.
pub type Coord = (usize, usize, Path);

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct HomProfile {
    pub dims: BTreeMap<i64, usize>,
}

impl HomProfile {
    pub fn get(&self, d: i64) -> usize {
        self.dims.get(&d).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn shifted(&self, n: i64) -> HomProfile {
        HomProfile {
            dims: self.dims.iter().map(|(d, v)| (d + n, *v)).collect(),
        }
    }
}

/// A graded map between complexes, up to nothing: homotopy is decided by
/// the oracle on demand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainMap {
    pub source: ProjComplex,
    pub target: ProjComplex,
    pub degree: i64,
    pub components: Vec<(Coord, Rational64)>,
}

impl ChainMap {
    pub fn identity(x: &ProjComplex) -> ChainMap {
        ChainMap {
            source: x.clone(),
            target: x.clone(),
            degree: 0,
            components: x
                .terms
                .iter()
                .enumerate()
                .map(|(i, t)| ((i, i, Path::trivial(t.vertex)), Rational64::one()))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|(_, c)| c.is_zero())
    }

    pub fn scaled(&self, c: Rational64) -> ChainMap {
        ChainMap {
            components: self.components.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Propagation {
    Map(ChainMap),
    NullHomotopic(ChainMap),
    /// No chain map has a nonzero coefficient at the seed.
    Obstructed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub self_profile: HomProfile,
    /// `(Hom(probe, X), Hom(X, probe))` per probe.
    pub against: Vec<(HomProfile, HomProfile)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArReport {
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Basis of one degree of the Hom complex.
#[derive(Debug, Clone, Default)]
pub struct HomBasis {
    pub coords: Vec<Coord>,
    pub index: HashMap<Coord, usize>,
}

impl HomBasis {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    fn vector<F: Field>(&self, comps: &[(Coord, Rational64)]) -> Vec<F> {
        let mut v = vec![F::zero(); self.len()];
        for (c, q) in comps {
            let k = self.index[c];
            v[k] = v[k].add(&F::from_rational(q));
        }
        v
    }
}

/// The linear-algebra oracle over one presentation.
pub struct Oracle<'a> {
    pub p: &'a GentlePresentation,
    table: PathTable,
    pub field: FieldChoice,
}

pub fn hom_profile(p: &GentlePresentation, x: &ProjComplex, y: &ProjComplex) -> HomProfile {
    Oracle::new(p).hom_profile(x, y)
}

fn degree_window(x: &ProjComplex, y: &ProjComplex) -> Option<(i64, i64)> {
    let (xl, xh) = x.degree_range()?;
    let (yl, yh) = y.degree_range()?;
    Some((yl - xh, yh - xl))
}

fn to_big(q: &Rational64) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

impl<'a> Oracle<'a> {
    pub fn new(p: &'a GentlePresentation) -> Self {
        Oracle {
            p,
            table: PathTable::new(p),
            field: FieldChoice::Prime,
        }
    }

    pub fn with_field(p: &'a GentlePresentation, field: FieldChoice) -> Self {
        Oracle {
            field,
            ..Oracle::new(p)
        }
    }

    pub fn basis(&self, x: &ProjComplex, y: &ProjComplex, d: i64) -> HomBasis {
        let mut coords = Vec::new();
        for (i, s) in x.terms.iter().enumerate() {
            for (j, t) in y.terms.iter().enumerate() {
                if t.degree == s.degree + d {
                    for u in self.table.between(s.vertex, t.vertex) {
                        coords.push((i, j, u.clone()));
                    }
                }
            }
        }
        coords.sort();
        let index = coords.iter().cloned().enumerate().map(|(k, c)| (c, k)).collect();
        HomBasis { coords, index }
    }

    /// `D` applied to one basis vector of degree `d`.
    fn d_image(
        &self,
        x: &ProjComplex,
        y: &ProjComplex,
        d: i64,
        (i, j, u): &Coord,
    ) -> Vec<(Coord, Rational64)> {
        let mut out: BTreeMap<Coord, Rational64> = BTreeMap::new();
        for e in y.entries.iter().filter(|e| e.from == *j) {
            for (c, w) in &e.coeffs {
                if let Some(uw) = self.p.multiply(u, w) {
                    *out.entry((*i, e.to, uw)).or_insert_with(Rational64::zero) += c;
                }
            }
        }
        let sign = if d.rem_euclid(2) == 0 { -1 } else { 1 };
        for e in x.entries.iter().filter(|e| e.to == *i) {
            for (c, w) in &e.coeffs {
                if let Some(wu) = self.p.multiply(w, u) {
                    *out.entry((e.from, *j, wu)).or_insert_with(Rational64::zero) +=
                        c * Rational64::from_integer(sign);
                }
            }
        }
        out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Matrix of `D : Hom^d -> Hom^{d+1}` with the two bases.
    pub fn differential(
        &self,
        x: &ProjComplex,
        y: &ProjComplex,
        d: i64,
    ) -> (HomBasis, HomBasis, SparseColumns) {
        let src = self.basis(x, y, d);
        let tgt = self.basis(x, y, d + 1);
        let mut m = SparseColumns::new(tgt.len());
        for c in &src.coords {
            m.cols.push(
                self.d_image(x, y, d, c)
                    .into_iter()
                    .map(|(k, v)| (tgt.index[&k], v))
                    .collect(),
            );
        }
        (src, tgt, m)
    }

    fn rank_of(&self, m: &SparseColumns) -> usize {
        if m.rows == 0 || m.ncols() == 0 {
            return 0;
        }
        match self.field {
            FieldChoice::Prime => rank(&m.dense::<Fp>()),
            FieldChoice::Rational => rank(&m.dense::<BigRational>()),
        }
    }

    pub fn hom_profile(&self, x: &ProjComplex, y: &ProjComplex) -> HomProfile {
        let mut dims = BTreeMap::new();
        let Some((lo, hi)) = degree_window(x, y) else {
            return HomProfile::default();
        };
        let mut prev_rank = 0;
        for d in lo..=hi {
            let (src, _, m) = self.differential(x, y, d);
            let r = self.rank_of(&m);
            let h = src.len() - r - prev_rank;
            if h > 0 {
                dims.insert(d, h);
            }
            prev_rank = r;
        }
        HomProfile { dims }
    }

    pub fn apply_d(&self, f: &ChainMap) -> Vec<(Coord, Rational64)> {
        let mut out: BTreeMap<Coord, Rational64> = BTreeMap::new();
        for (c, q) in &f.components {
            for (k, v) in self.d_image(&f.source, &f.target, f.degree, c) {
                *out.entry(k).or_insert_with(Rational64::zero) += v * q;
            }
        }
        out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn is_chain_map(&self, f: &ChainMap) -> bool {
        self.apply_d(f).is_empty()
    }

    /// Boundaries of degree `d` in a span builder over the prime field.
    fn boundary_span(&self, x: &ProjComplex, y: &ProjComplex, d: i64) -> (HomBasis, SpanBuilder<Fp>) {
        let (_, tgt, m) = self.differential(x, y, d - 1);
        let mut span = SpanBuilder::new(tgt.len());
        for col in &m.cols {
            let mut v = vec![Fp::zero(); tgt.len()];
            for (r, q) in col {
                v[*r] = v[*r].add(&Fp::from_rational(q));
            }
            span.insert(&v);
        }
        (tgt, span)
    }

    pub fn is_null_homotopic(&self, f: &ChainMap) -> bool {
        let (basis, span) = self.boundary_span(&f.source, &f.target, f.degree);
        span.contains(&basis.vector::<Fp>(&f.components))
    }

    /// Close a single seed component into a chain map, growing the support
    /// one neighbourhood at a time until the chain condition can be met.
    pub fn propagate_component(
        &self,
        x: &ProjComplex,
        y: &ProjComplex,
        d: i64,
        seed: &Coord,
    ) -> Result<Propagation, AlgebraError> {
        let (src, tgt, m) = self.differential(x, y, d);
        let Some(&s) = src.index.get(seed) else {
            return Err(AlgebraError::IncompatibleSeed);
        };
        let mut row_cols: Vec<Vec<usize>> = vec![Vec::new(); tgt.len()];
        for (c, col) in m.cols.iter().enumerate() {
            for (r, _) in col {
                row_cols[*r].push(c);
            }
        }
        let mut support: BTreeSet<usize> = BTreeSet::from([s]);
        loop {
            if let Some(sol) = self.solve_on_support(&m, &support, s) {
                let components: Vec<(Coord, Rational64)> = sol
                    .into_iter()
                    .map(|(c, q)| Ok((src.coords[c].clone(), big_to_rational64(&q).ok_or(AlgebraError::Overflow)?)))
                    .collect::<Result<_, AlgebraError>>()?;
                let f = ChainMap {
                    source: x.clone(),
                    target: y.clone(),
                    degree: d,
                    components,
                };
                debug_assert!(self.is_chain_map(&f));
                return Ok(if self.is_null_homotopic(&f) {
                    Propagation::NullHomotopic(f)
                } else {
                    Propagation::Map(f)
                });
            }
            let grown: BTreeSet<usize> = support
                .iter()
                .flat_map(|&c| m.cols[c].iter().flat_map(|(r, _)| row_cols[*r].iter().copied()))
                .filter(|c| !support.contains(c))
                .collect();
            if grown.is_empty() {
                return Ok(Propagation::Obstructed);
            }
            support.extend(grown);
        }
    }

    /// Solve `D x = 0` with `x[seed] = 1` and `x` supported on `support`.
    fn solve_on_support(
        &self,
        m: &SparseColumns,
        support: &BTreeSet<usize>,
        seed: usize,
    ) -> Option<Vec<(usize, BigRational)>> {
        let others: Vec<usize> = support.iter().copied().filter(|&c| c != seed).collect();
        let rows: Vec<usize> = support
            .iter()
            .flat_map(|&c| m.cols[c].iter().map(|(r, _)| *r))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if rows.is_empty() {
            return Some(vec![(seed, <BigRational as One>::one())]);
        }
        let row_pos: HashMap<usize, usize> = rows.iter().enumerate().map(|(k, &r)| (r, k)).collect();
        let mut a = vec![vec![<BigRational as Zero>::zero(); others.len()]; rows.len()];
        let mut b = vec![<BigRational as Zero>::zero(); rows.len()];
        for (k, &c) in others.iter().enumerate() {
            for (r, q) in &m.cols[c] {
                a[row_pos[r]][k] += to_big(q);
            }
        }
        for (r, q) in &m.cols[seed] {
            b[row_pos[r]] -= to_big(q);
        }
        let x = solve(&a, &b, others.len())?;
        let mut out = vec![(seed, <BigRational as One>::one())];
        out.extend(others.into_iter().zip(x).filter(|(_, q)| !Field::is_zero(q)));
        out.sort_by_key(|(c, _)| *c);
        Some(out)
    }

    /// Propagated maps from every seed of degree `d`, kept when independent
    /// of boundaries and of the maps kept before, in seed order.
    pub fn alp_basis(&self, x: &ProjComplex, y: &ProjComplex, d: i64) -> Vec<ChainMap> {
        let (basis, mut span) = self.boundary_span(x, y, d);
        let mut out = Vec::new();
        for seed in &basis.coords {
            if let Ok(Propagation::Map(f)) = self.propagate_component(x, y, d, seed) {
                if span.insert(&basis.vector::<Fp>(&f.components)) {
                    out.push(f);
                }
            }
        }
        out
    }

    pub fn alp_basis_all(&self, x: &ProjComplex, y: &ProjComplex) -> BTreeMap<i64, Vec<ChainMap>> {
        let Some((lo, hi)) = degree_window(x, y) else {
            return BTreeMap::new();
        };
        (lo..=hi)
            .map(|d| (d, self.alp_basis(x, y, d)))
            .filter(|(_, v)| !v.is_empty())
            .collect()
    }

    /// `f ∘ g`: first `g`, then `f`.
    pub fn compose(&self, f: &ChainMap, g: &ChainMap) -> Result<ChainMap, AlgebraError> {
        if g.target != f.source {
            return Err(AlgebraError::NotComposable);
        }
        let mut acc: BTreeMap<Coord, Rational64> = BTreeMap::new();
        for ((i, j, u), a) in &g.components {
            for ((j2, k, w), b) in &f.components {
                if j != j2 {
                    continue;
                }
                if let Some(uw) = self.p.multiply(u, w) {
                    *acc.entry((*i, *k, uw)).or_insert_with(Rational64::zero) += a * b;
                }
            }
        }
        Ok(ChainMap {
            source: g.source.clone(),
            target: f.target.clone(),
            degree: f.degree + g.degree,
            components: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn fingerprint(&self, x: &ProjComplex, probes: &[ProjComplex]) -> Fingerprint {
        Fingerprint {
            self_profile: self.hom_profile(x, x),
            against: probes
                .iter()
                .map(|q| (self.hom_profile(q, x), self.hom_profile(x, q)))
                .collect(),
        }
    }

    /// Fingerprint comparison against all stalks in the window and both
    /// operands.
    pub fn same_fingerprint(&self, x: &ProjComplex, y: &ProjComplex, window: i64) -> bool {
        let mut probes = stalk_probes(self.p, window);
        probes.push(x.clone());
        probes.push(y.clone());
        self.fingerprint(x, &probes) == self.fingerprint(y, &probes)
    }

    /// Zero cohomology against every indecomposable projective.
    pub fn is_acyclic(&self, x: &ProjComplex) -> bool {
        (0..self.p.num_vertices()).all(|v| self.hom_profile(&ProjComplex::stalk(v, 0), x).total() == 0)
    }

    /// A degree-zero chain map is an isomorphism in the homotopy category
    /// exactly when its cone is acyclic.
    pub fn is_invertible(&self, f: &ChainMap) -> bool {
        f.degree == 0
            && self.is_chain_map(f)
            && mapping_cone(f).map(|c| self.is_acyclic(&c)).unwrap_or(false)
    }

    /// Look for a quasi-isomorphism among random combinations of degree-zero
    /// cycles. A positive answer is certain; a negative one fails only with
    /// negligible probability.
    pub fn find_isomorphism(&self, x: &ProjComplex, y: &ProjComplex) -> Option<ChainMap> {
        if x.is_zero() && y.is_zero() {
            return Some(ChainMap::identity(x));
        }
        let stalks = stalk_probes(self.p, 0);
        for s in &stalks {
            if self.hom_profile(s, x) != self.hom_profile(s, y) {
                return None;
            }
        }
        let (src, _, m) = self.differential(x, y, 0);
        let cycles = crate::field::nullspace(&m.dense::<BigRational>(), src.len());
        if cycles.is_empty() {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x150);
        for _ in 0..4 {
            let mut v = vec![<BigRational as Zero>::zero(); src.len()];
            for z in &cycles {
                let c = BigRational::from_integer(BigInt::from(rng.gen_range(1..=97i64)));
                for (a, b) in v.iter_mut().zip(z) {
                    *a += &c * b;
                }
            }
            let components = src
                .coords
                .iter()
                .zip(&v)
                .filter(|(_, q)| !Field::is_zero(*q))
                .map(|(c, q)| Some((c.clone(), big_to_rational64(q)?)))
                .collect::<Option<Vec<_>>>()?;
            let f = ChainMap {
                source: x.clone(),
                target: y.clone(),
                degree: 0,
                components,
            };
            if self.is_invertible(&f) {
                return Some(f);
            }
        }
        None
    }

    pub fn is_isomorphic(&self, x: &ProjComplex, y: &ProjComplex) -> bool {
        self.find_isomorphism(x, y).is_some()
    }

    /// Checks that `h : X -> Z` of degree 1 kills every non-invertible map
    /// into `X` from the probes while keeping the invertible ones alive.
    ///
    /// For each probe `U` and degree `d` the composition with `h` is a
    /// linear map from `Hom(U, X[d])` to `Hom(U, Z[d+1])`. Its rank must be
    /// zero unless `U ≅ X[d]`, where it must be one: the kernel is
    /// then a right ideal of codimension one in a local ring, hence its
    /// radical.
    pub fn ar_check_map(&self, h: &ChainMap, probes: &[ProjComplex]) -> ArReport {
        let x = &h.source;
        let mut failures = Vec::new();
        if !self.is_chain_map(h) || self.is_null_homotopic(h) {
            failures.push("distinguished map is not a nonzero morphism".into());
        }
        for (k, u) in probes.iter().enumerate() {
            for (d, maps) in self.alp_basis_all(u, x) {
                let iso = self.is_isomorphic(u, &x.shift(d));
                let (basis, mut span) = self.boundary_span(u, &h.target, d + h.degree);
                let mut r = 0;
                for f in &maps {
                    let c = self.compose(h, f).expect("composable");
                    if span.insert(&basis.vector::<Fp>(&c.components)) {
                        r += 1;
                    }
                }
                let expected = usize::from(iso);
                if r != expected {
                    failures.push(format!(
                        "probe {k}, degree {d}: composition has rank {r}, expected {expected}"
                    ));
                }
            }
        }
        ArReport {
            ok: failures.is_empty(),
            failures,
        }
    }

    /// Auslander-Reiten check for an arc: the unique degree one map from
    /// its complex to the complex of its translate must behave as the
    /// connecting morphism of an AR triangle against the dual arcs, a few
    /// steps of their translation orbits, and the arc itself.
    pub fn ar_check(&self, m: &DiscModel, delta: &GradedCurve) -> Result<ArReport, AlgebraError> {
        let x = string_complex(self.p, m, delta)?;
        let z = string_complex(self.p, m, &tau_translate(m, delta)?)?;
        let maps = self.alp_basis(&x, &z, 1);
        if maps.len() != 1 {
            return Ok(ArReport {
                ok: false,
                failures: vec![format!("{} degree one maps to the translate, expected 1", maps.len())],
            });
        }
        let mut probes = vec![x];
        for v in 0..self.p.num_vertices() {
            let mut g = graded(m, CurveWord::dual_arc(m, v), 0)?;
            for _ in 0..3 {
                probes.push(string_complex(self.p, m, &g)?);
                g = tau_translate(m, &g)?;
            }
        }
        Ok(self.ar_check_map(&maps[0], &probes))
    }

    /// `m` when `X` has self-extensions `k ⊕ k[-m]` and Serre duality
    /// `Hom(Y, X[d]) ≅ Hom(X, Y[m-d])*` holds against every probe.
    pub fn spherical_degree(&self, x: &ProjComplex, probes: &[ProjComplex]) -> Option<i64> {
        let prof = self.hom_profile(x, x);
        let m = match (prof.total(), prof.get(0)) {
            (2, 2) => 0,
            (2, 1) => *prof.dims.keys().find(|&&d| d != 0)?,
            _ => return None,
        };
        for y in probes {
            let yx = self.hom_profile(y, x);
            let xy = self.hom_profile(x, y);
            let mirrored = HomProfile {
                dims: xy.dims.iter().map(|(d, v)| (m - d, *v)).collect(),
            };
            if yx != mirrored {
                return None;
            }
        }
        Some(m)
    }

    /// Cone of the evaluation map `⊕ X[-d] -> Y` over a basis of
    /// `Hom(X, Y[d])`.
    pub fn spherical_twist(
        &self,
        x: &ProjComplex,
        y: &ProjComplex,
        probes: &[ProjComplex],
    ) -> Result<ProjComplex, AlgebraError> {
        if self.spherical_degree(x, probes).is_none() {
            return Err(AlgebraError::NotSpherical(
                "self-extensions or duality check failed".into(),
            ));
        }
        let mut source = ProjComplex::zero();
        let mut components = Vec::new();
        for (d, maps) in self.alp_basis_all(x, y) {
            for f in maps {
                let off = source.terms.len();
                source = source.direct_sum(&x.shift(-d));
                components.extend(
                    f.components
                        .into_iter()
                        .map(|((i, j, u), c)| ((i + off, j, u), c)),
                );
            }
        }
        let ev = ChainMap {
            source,
            target: y.clone(),
            degree: 0,
            components,
        };
        debug_assert!(self.is_chain_map(&ev));
        mapping_cone(&ev)
    }

    /// The morphism of the intersection of two graded arcs at the marked
    /// point of `disc`, between the complexes of the arcs turned to start
    /// there. Returns the map together with the resolved word.
    pub fn intersection_morphism(
        &self,
        m: &DiscModel,
        a: &GradedCurve,
        b: &GradedCurve,
        disc: usize,
    ) -> Result<(ChainMap, GradedCurve), AlgebraError> {
        let (resolved, a_first) = resolve_at_marked_point(m, a, b, disc)?;
        let orient = |w: &GradedCurve| {
            if w.word.start_disc() == disc {
                w.clone()
            } else {
                w.reversed(m)
            }
        };
        let (src, tgt) = if a_first { (orient(a), orient(b)) } else { (orient(b), orient(a)) };
        let (p1, p2) = (src.word.exits[0].pos, tgt.word.exits[0].pos);
        let x = string_complex(self.p, m, &src)?;
        let y = string_complex(self.p, m, &tgt)?;
        let seed = (0, 0, m.thread_path(self.p, disc, p1, p2));
        match self.propagate_component(&x, &y, 0, &seed)? {
            Propagation::Map(f) => Ok((f, resolved)),
            _ => Err(AlgebraError::NotAnIntersection),
        }
    }
}

/// Stalks `P_v[n]` for every vertex and `|n| <= window`.
pub fn stalk_probes(p: &GentlePresentation, window: i64) -> Vec<ProjComplex> {
    (0..p.num_vertices())
        .flat_map(|v| (-window..=window).map(move |n| ProjComplex::stalk(v, -n)))
        .collect()
}

/// Cone of a degree-zero map: `X[1] ⊕ Y` with differential
/// `[[-∂_X, 0], [f, ∂_Y]]`.
pub fn mapping_cone(f: &ChainMap) -> Result<ProjComplex, AlgebraError> {
    if f.degree != 0 {
        return Err(AlgebraError::ConeDegree(f.degree));
    }
    let x = f.source.shift(1);
    let off = x.terms.len();
    let mut terms: Vec<Term> = x.terms.clone();
    terms.extend_from_slice(&f.target.terms);
    let mut entries = x.entries.clone();
    entries.extend(f.target.entries.iter().map(|e| Entry {
        from: e.from + off,
        to: e.to + off,
        coeffs: e.coeffs.clone(),
    }));
    let mut grouped: BTreeMap<(usize, usize), Vec<(Rational64, Path)>> = BTreeMap::new();
    for ((i, j, u), c) in &f.components {
        if !c.is_zero() {
            grouped.entry((*i, off + j)).or_default().push((*c, u.clone()));
        }
    }
    entries.extend(grouped.into_iter().map(|((from, to), coeffs)| Entry { from, to, coeffs }));
    Ok(ProjComplex {
        terms,
        entries,
        kind: ComplexKind::General,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named;
    use crate::curves::{boundary_segments, graded, tau_translate, CurveWord};
    use crate::objects::{band_complex, check_dsquared};
    use crate::presentation::paths_between;
    use crate::surface::{build_disc_model, Occ};

    /// Hom between stalks is the space of paths, independently counted.
    #[test]
    fn stalk_homs_are_path_spaces() {
        for (_, p) in named::all() {
            let o = Oracle::new(&p);
            for a in 0..p.num_vertices() {
                for b in 0..p.num_vertices() {
                    let prof = o.hom_profile(&ProjComplex::stalk(a, 0), &ProjComplex::stalk(b, 0));
                    assert_eq!(prof.get(0), paths_between(&p, a, b).len());
                    assert_eq!(prof.total(), prof.get(0));
                }
            }
        }
    }

    #[test]
    fn a2_projective_generator_has_three_endomorphisms() {
        let p = named::a2();
        let g = ProjComplex::stalk(0, 0).direct_sum(&ProjComplex::stalk(1, 0));
        assert_eq!(hom_profile(&p, &g, &g).total(), 3);
    }

    #[test]
    fn cone_of_identity_is_contractible() {
        let p = named::a3_linear();
        let m = build_disc_model(&p).unwrap();
        let o = Oracle::new(&p);
        for seg in boundary_segments(&m) {
            let x = string_complex(&p, &m, &graded(&m, seg, 0).unwrap()).unwrap();
            let c = mapping_cone(&ChainMap::identity(&x)).unwrap();
            assert!(check_dsquared(&p, &c).is_ok());
            assert!(o.is_acyclic(&c));
            for v in 0..3 {
                assert_eq!(o.hom_profile(&c, &ProjComplex::stalk(v, 0)).total(), 0);
            }
        }
    }

    #[test]
    fn cone_of_arrow_map_is_two_term_string() {
        let p = named::a2();
        let m = build_disc_model(&p).unwrap();
        let o = Oracle::new(&p);
        let (x, y) = (ProjComplex::stalk(0, 0), ProjComplex::stalk(1, 0));
        let basis = o.alp_basis(&x, &y, 0);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].components[0].0 .2.arrows, vec![0]);
        let c = mapping_cone(&basis[0]).unwrap();
        let w = crate::objects::identify_string(&p, &m, &c).unwrap();
        assert_eq!(w.word.len(), 2);
    }

    #[test]
    fn kronecker_bands_with_distinct_parameters_are_orthogonal() {
        let p = named::kronecker();
        let m = build_disc_model(&p).unwrap();
        let band = CurveWord::band(vec![Occ { disc: 0, pos: 0 }, Occ { disc: 1, pos: 1 }]);
        let g = graded(&m, band, 0).unwrap();
        let b1 = band_complex(&p, &m, &g, Rational64::from_integer(1)).unwrap();
        let b2 = band_complex(&p, &m, &g, Rational64::from_integer(2)).unwrap();
        let o = Oracle::new(&p);
        assert_eq!(o.hom_profile(&b1, &b2).total(), 0);
        let self_prof = o.hom_profile(&b1, &b1);
        assert_eq!(self_prof.get(0), 1);
        assert_eq!(self_prof.get(1), 1);
        assert_eq!(o.alp_basis(&b1, &b1, 0).len(), 1);
        assert_eq!(o.alp_basis(&b1, &b1, 1).len(), 1);
        assert!(!o.same_fingerprint(&b1, &b2, 0));
        assert_eq!(o.spherical_degree(&b1, &stalk_probes(&p, 0)), Some(1));
    }

    #[test]
    fn propagation_of_identity_seed() {
        let p = named::a3_zigzag();
        let m = build_disc_model(&p).unwrap();
        let o = Oracle::new(&p);
        for seg in boundary_segments(&m) {
            let x = string_complex(&p, &m, &graded(&m, seg, 0).unwrap()).unwrap();
            let seed = (0, 0, Path::trivial(x.terms[0].vertex));
            match o.propagate_component(&x, &x, 0, &seed).unwrap() {
                Propagation::Map(f) => assert!(o.is_invertible(&f)),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn null_homotopic_seed_is_recognised() {
        // the contractible complex P1 -a-> P2 in A2: the identity is a boundary
        let p = named::a2();
        let m = build_disc_model(&p).unwrap();
        let seg = boundary_segments(&m).into_iter().find(|s| s.len() == 2).unwrap();
        let x = string_complex(&p, &m, &graded(&m, seg, 0).unwrap()).unwrap();
        let c = mapping_cone(&ChainMap::identity(&x)).unwrap();
        let o = Oracle::new(&p);
        let seed = (0, 0, Path::trivial(c.terms[0].vertex));
        assert!(matches!(
            o.propagate_component(&c, &c, 0, &seed).unwrap(),
            Propagation::NullHomotopic(_)
        ));
        assert!(matches!(
            o.propagate_component(&c, &c, 7, &seed),
            Err(AlgebraError::IncompatibleSeed)
        ));
    }

    #[test]
    fn composite_hitting_relation_is_zero() {
        let p = named::a3_with_relation();
        let o = Oracle::new(&p);
        let s: Vec<_> = (0..3).map(|v| ProjComplex::stalk(v, 0)).collect();
        let f = &o.alp_basis(&s[0], &s[1], 0)[0];
        let g = &o.alp_basis(&s[1], &s[2], 0)[0];
        assert!(o.compose(g, f).unwrap().is_zero());
        let id = ChainMap::identity(&s[0]);
        assert_eq!(o.compose(f, &id).unwrap().components, f.components);
    }

    #[test]
    fn ar_check_on_a2_segments_and_failure_with_identity() {
        let p = named::a2();
        let m = build_disc_model(&p).unwrap();
        let o = Oracle::new(&p);
        let probes: Vec<ProjComplex> = boundary_segments(&m)
            .into_iter()
            .map(|s| string_complex(&p, &m, &graded(&m, s, 0).unwrap()).unwrap())
            .collect();
        for seg in boundary_segments(&m) {
            let g = graded(&m, seg, 0).unwrap();
            let x = string_complex(&p, &m, &g).unwrap();
            let t = string_complex(&p, &m, &tau_translate(&m, &g).unwrap()).unwrap();
            let hs = o.alp_basis(&x, &t, 1);
            assert_eq!(hs.len(), 1);
            let rep = o.ar_check_map(&hs[0], &probes);
            assert!(rep.ok, "{:?}", rep.failures);
            let bad = o.ar_check_map(&ChainMap::identity(&x), &probes);
            assert!(!bad.ok);
        }
    }

    #[test]
    fn ar_check_accepts_translates_of_boundary_segments() {
        for p in [named::a2(), named::a3_zigzag(), named::kronecker()] {
            let m = build_disc_model(&p).unwrap();
            let o = Oracle::new(&p);
            for w in boundary_segments(&m) {
                let r = o.ar_check(&m, &graded(&m, w, 0).unwrap()).unwrap();
                assert!(r.ok, "{:?}", r.failures);
            }
        }
    }

    /// The identity is not the connecting map of an AR triangle: the
    /// arrow `P1 -> P2` survives composition with it.
    #[test]
    fn ar_check_rejects_identity() {
        let p = named::a2();
        let o = Oracle::new(&p);
        let x = ProjComplex::stalk(1, 0);
        let r = o.ar_check_map(&ChainMap::identity(&x), &[x.clone(), ProjComplex::stalk(0, 0)]);
        assert!(!r.ok);
        assert_eq!(r.failures.len(), 1, "{:?}", r.failures);
    }
}
