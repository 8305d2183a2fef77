//! Quivers with quadratic zero relations: parsing, the gentle axioms, path
//! arithmetic and threads.
//!
//! Arrows compose left to right. A path `a1 a2 ... an` starts at `s(a1)` and
//! ends at `t(an)`; a relation `(a, b)` says the composite `ab` vanishes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    pub fn outgoing(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].source == v)
            .collect()
    }

    pub fn incoming(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].target == v)
            .collect()
    }

    /// Connected components of the underlying graph, as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for a in &self.arrows {
            let (x, y) = (find(&mut parent, a.source), find(&mut parent, a.target));
            if x != y {
                parent[x] = y;
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        let mut out: Vec<Vec<usize>> = groups.into_values().collect();
        out.sort();
        out
    }
}

/// A quiver together with a set of length-two zero relations.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GentlePresentation {
    pub quiver: Quiver,
    pub relations: BTreeSet<(usize, usize)>,
}

/// A path in the quiver; `arrows` empty means the trivial path at `start`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Path {
    pub start: usize,
    pub end: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path {
            start: v,
            end: v,
            arrows: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThreadKind {
    Permitted,
    Forbidden,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Thread {
    pub kind: ThreadKind,
    /// First vertex; for a trivial thread the vertex it sits at.
    pub start: usize,
    pub arrows: Vec<usize>,
    /// Forbidden threads cut open from a full relation cycle.
    pub cyclic: bool,
}

impl Thread {
    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Vertices along the thread, with multiplicity.
    pub fn vertices(&self, q: &Quiver) -> Vec<usize> {
        let mut out = vec![self.start];
        out.extend(self.arrows.iter().map(|&a| q.arrows[a].target));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Threads {
    pub permitted: Vec<Thread>,
    pub forbidden: Vec<Thread>,
    /// Each cycle `a1 ... an` has every cyclically consecutive pair in the
    /// relations; stored in its lexicographically least rotation.
    pub full_relation_cycles: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    TooManyIncoming { vertex: String, arrows: Vec<String> },
    TooManyOutgoing { vertex: String, arrows: Vec<String> },
    RelationSuccessors { arrow: String, witnesses: Vec<String> },
    RelationPredecessors { arrow: String, witnesses: Vec<String> },
    FreeSuccessors { arrow: String, witnesses: Vec<String> },
    FreePredecessors { arrow: String, witnesses: Vec<String> },
    NotAdmissible { cycle: Vec<String> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooManyIncoming { vertex, arrows } => {
                write!(f, "vertex {vertex} has more than two incoming arrows: {}", arrows.join(" "))
            }
            Violation::TooManyOutgoing { vertex, arrows } => {
                write!(f, "vertex {vertex} has more than two outgoing arrows: {}", arrows.join(" "))
            }
            Violation::RelationSuccessors { arrow, witnesses } => write!(
                f,
                "arrow {arrow} is followed by several relations: {}",
                witnesses.join(" ")
            ),
            Violation::RelationPredecessors { arrow, witnesses } => write!(
                f,
                "arrow {arrow} is preceded by several relations: {}",
                witnesses.join(" ")
            ),
            Violation::FreeSuccessors { arrow, witnesses } => write!(
                f,
                "arrow {arrow} has several nonzero continuations: {}",
                witnesses.join(" ")
            ),
            Violation::FreePredecessors { arrow, witnesses } => write!(
                f,
                "arrow {arrow} has several nonzero predecessors: {}",
                witnesses.join(" ")
            ),
            Violation::NotAdmissible { cycle } => write!(
                f,
                "cycle without relations (algebra is infinite dimensional): {}",
                cycle.join(" ")
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn is_id_char(c: char) -> bool {
    !c.is_whitespace() && c != ':' && c != '#'
}

/// Parse the line-oriented `.gp` format. Gentle axioms are not checked here.
pub fn parse_presentation(text: &str) -> Result<GentlePresentation, ParseError> {
    let mut quiver = Quiver::default();
    let mut rel_lines: Vec<(usize, usize, String, String)> = Vec::new();
    let mut seen_vertex: HashMap<String, usize> = HashMap::new();
    let mut seen_arrow: HashMap<String, usize> = HashMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = content.len() - trimmed.len();
        let syntax = |col: usize, message: &str| ParseError::Syntax {
            line: line_no,
            column: col + 1,
            message: message.to_string(),
        };

        if let Some(rest) = trimmed.strip_prefix("vertices:") {
            let offset = indent + "vertices:".len();
            for tok in tokens(rest) {
                if !tok.1.chars().all(is_id_char) {
                    return Err(syntax(offset + tok.0, "invalid vertex id"));
                }
                if seen_vertex.contains_key(tok.1) {
                    return Err(ParseError::DuplicateId {
                        line: line_no,
                        id: tok.1.to_string(),
                    });
                }
                seen_vertex.insert(tok.1.to_string(), quiver.vertices.len());
                quiver.vertices.push(tok.1.to_string());
            }
        } else if let Some(rest) = trimmed.strip_prefix("arrow ") {
            let offset = indent + "arrow ".len();
            let Some(colon) = rest.find(':') else {
                return Err(syntax(offset, "expected `arrow <id>: <src> -> <tgt>`"));
            };
            let id = rest[..colon].trim();
            if id.is_empty() || !id.chars().all(is_id_char) {
                return Err(syntax(offset, "invalid arrow id"));
            }
            let body = &rest[colon + 1..];
            let toks = tokens(body);
            if toks.len() != 3 || toks[1].1 != "->" {
                let col = offset + colon + 1 + toks.first().map(|t| t.0).unwrap_or(0);
                return Err(syntax(col, "expected `<src> -> <tgt>`"));
            }
            if seen_arrow.contains_key(id) || seen_vertex.contains_key(id) {
                return Err(ParseError::DuplicateId {
                    line: line_no,
                    id: id.to_string(),
                });
            }
            let lookup = |name: &str| {
                seen_vertex
                    .get(name)
                    .copied()
                    .ok_or_else(|| ParseError::UndeclaredVertex {
                        line: line_no,
                        id: name.to_string(),
                    })
            };
            let source = lookup(toks[0].1)?;
            let target = lookup(toks[2].1)?;
            seen_arrow.insert(id.to_string(), quiver.arrows.len());
            quiver.arrows.push(Arrow {
                id: id.to_string(),
                source,
                target,
            });
        } else if let Some(rest) = trimmed.strip_prefix("rel ") {
            let offset = indent + "rel ".len();
            let toks = tokens(rest);
            if toks.len() != 2 {
                return Err(syntax(offset, "expected `rel <arrow> <arrow>`"));
            }
            rel_lines.push((line_no, offset, toks[0].1.to_string(), toks[1].1.to_string()));
        } else {
            return Err(syntax(indent, "expected `vertices:`, `arrow` or `rel`"));
        }
    }

    let mut relations = BTreeSet::new();
    for (line, _, a, b) in rel_lines {
        let find = |name: &str| {
            seen_arrow
                .get(name)
                .copied()
                .ok_or_else(|| ParseError::UndeclaredArrow {
                    line,
                    id: name.to_string(),
                })
        };
        let (ia, ib) = (find(&a)?, find(&b)?);
        if quiver.arrows[ia].target != quiver.arrows[ib].source {
            return Err(ParseError::NotComposable {
                line,
                first: a,
                second: b,
            });
        }
        relations.insert((ia, ib));
    }
    Ok(GentlePresentation { quiver, relations })
}

fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(st)) => {
                out.push((st, &s[st..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(st) = start {
        out.push((st, &s[st..]));
    }
    out
}

impl GentlePresentation {
    pub fn new(vertices: &[&str], arrows: &[(&str, &str, &str)], relations: &[(&str, &str)]) -> Self {
        let quiver = Quiver {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            arrows: arrows
                .iter()
                .map(|(id, s, t)| Arrow {
                    id: id.to_string(),
                    source: vertices.iter().position(|v| v == s).expect("declared source"),
                    target: vertices.iter().position(|v| v == t).expect("declared target"),
                })
                .collect(),
        };
        let relations = relations
            .iter()
            .map(|(a, b)| {
                (
                    quiver.arrow_index(a).expect("declared arrow"),
                    quiver.arrow_index(b).expect("declared arrow"),
                )
            })
            .collect();
        GentlePresentation { quiver, relations }
    }

    pub fn num_vertices(&self) -> usize {
        self.quiver.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.quiver.arrows.len()
    }

    pub fn source(&self, a: usize) -> usize {
        self.quiver.arrows[a].source
    }

    pub fn target(&self, a: usize) -> usize {
        self.quiver.arrows[a].target
    }

    pub fn is_relation(&self, a: usize, b: usize) -> bool {
        self.relations.contains(&(a, b))
    }

    fn successors(&self, a: usize, in_relation: bool) -> Vec<usize> {
        self.quiver
            .outgoing(self.target(a))
            .into_iter()
            .filter(|&b| self.is_relation(a, b) == in_relation)
            .collect()
    }

    fn predecessors(&self, a: usize, in_relation: bool) -> Vec<usize> {
        self.quiver
            .incoming(self.source(a))
            .into_iter()
            .filter(|&b| self.is_relation(b, a) == in_relation)
            .collect()
    }

    /// The arrow continuing `a` without hitting a relation, if any.
    pub fn free_successor(&self, a: usize) -> Option<usize> {
        self.successors(a, false).into_iter().next()
    }

    pub fn free_predecessor(&self, a: usize) -> Option<usize> {
        self.predecessors(a, false).into_iter().next()
    }

    pub fn relation_successor(&self, a: usize) -> Option<usize> {
        self.successors(a, true).into_iter().next()
    }

    pub fn relation_predecessor(&self, a: usize) -> Option<usize> {
        self.predecessors(a, true).into_iter().next()
    }

    pub fn arrow_name(&self, a: usize) -> &str {
        &self.quiver.arrows[a].id
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.quiver.vertices[v]
    }

    /// Concatenate `u` then `v`; `None` if the product hits a relation.
    ///
    /// Panics if the endpoints do not match, which is a caller bug.
    pub fn multiply(&self, u: &Path, v: &Path) -> Option<Path> {
        assert_eq!(u.end, v.start, "paths do not compose");
        if let (Some(&x), Some(&y)) = (u.arrows.last(), v.arrows.first()) {
            if self.is_relation(x, y) {
                return None;
            }
        }
        let mut arrows = u.arrows.clone();
        arrows.extend_from_slice(&v.arrows);
        Some(Path {
            start: u.start,
            end: v.end,
            arrows,
        })
    }

    /// Build a path from consecutive arrows; `None` if they do not compose.
    pub fn path(&self, arrows: &[usize]) -> Option<Path> {
        let first = *arrows.first()?;
        for (&a, &b) in arrows.iter().tuple_windows() {
            if self.target(a) != self.source(b) {
                return None;
            }
        }
        Some(Path {
            start: self.source(first),
            end: self.target(*arrows.last().unwrap()),
            arrows: arrows.to_vec(),
        })
    }

    pub fn is_admissible_path(&self, p: &Path) -> bool {
        p.arrows
            .iter()
            .tuple_windows()
            .all(|(&a, &b)| !self.is_relation(a, b))
    }

    pub fn path_to_string(&self, p: &Path) -> String {
        if p.is_trivial() {
            format!("e{}", self.vertex_name(p.start))
        } else {
            p.arrows.iter().map(|&a| self.arrow_name(a)).join("")
        }
    }

    pub fn path_ids(&self, p: &Path) -> Vec<String> {
        if p.is_trivial() {
            vec![format!("e{}", self.vertex_name(p.start))]
        } else {
            p.arrows.iter().map(|&a| self.arrow_name(a).to_string()).collect()
        }
    }

    /// Canonical `.gp` text; parsing it gives back an equal presentation.
    pub fn emit(&self) -> String {
        let mut out = format!("vertices: {}\n", self.quiver.vertices.join(" "));
        for a in &self.quiver.arrows {
            out.push_str(&format!(
                "arrow {}: {} -> {}\n",
                a.id, self.quiver.vertices[a.source], self.quiver.vertices[a.target]
            ));
        }
        for &(a, b) in &self.relations {
            out.push_str(&format!("rel {} {}\n", self.arrow_name(a), self.arrow_name(b)));
        }
        out
    }

    /// Machine exchange format with stable key order and id-sorted arrays.
    pub fn to_canonical_json(&self) -> serde_json::Value {
        let vertices: Vec<&String> = self.quiver.vertices.iter().sorted().collect();
        let arrows: Vec<serde_json::Value> = self
            .quiver
            .arrows
            .iter()
            .sorted_by(|a, b| a.id.cmp(&b.id))
            .map(|a| {
                serde_json::json!({
                    "id": a.id,
                    "source": self.quiver.vertices[a.source],
                    "target": self.quiver.vertices[a.target],
                })
            })
            .collect();
        let relations: Vec<[&str; 2]> = self
            .relations
            .iter()
            .map(|&(a, b)| [self.arrow_name(a), self.arrow_name(b)])
            .sorted()
            .collect();
        serde_json::json!({
            "arrows": arrows,
            "relations": relations,
            "vertices": vertices,
        })
    }

    /// Rename vertices and arrows and reorder them by the given permutations.
    /// `vertex_perm[i]` is the new position of vertex `i`.
    pub fn relabel(&self, vertex_perm: &[usize], arrow_perm: &[usize], prefix: &str) -> Self {
        let n = self.num_vertices();
        let m = self.num_arrows();
        let mut vertices = vec![String::new(); n];
        for v in 0..n {
            vertices[vertex_perm[v]] = format!("{prefix}{}", vertex_perm[v]);
        }
        let mut arrows = vec![
            Arrow {
                id: String::new(),
                source: 0,
                target: 0
            };
            m
        ];
        for a in 0..m {
            let old = &self.quiver.arrows[a];
            arrows[arrow_perm[a]] = Arrow {
                id: format!("{prefix}a{}", arrow_perm[a]),
                source: vertex_perm[old.source],
                target: vertex_perm[old.target],
            };
        }
        let relations = self
            .relations
            .iter()
            .map(|&(a, b)| (arrow_perm[a], arrow_perm[b]))
            .collect();
        GentlePresentation {
            quiver: Quiver { vertices, arrows },
            relations,
        }
    }
}

impl fmt::Display for GentlePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}

/// Check the gentle axioms and admissibility, collecting every violation.
pub fn validate_gentle(p: &GentlePresentation) -> ValidationReport {
    let q = &p.quiver;
    let names = |arrows: &[usize]| arrows.iter().map(|&a| p.arrow_name(a).to_string()).collect_vec();
    let mut violations = Vec::new();

    for v in 0..p.num_vertices() {
        let inc = q.incoming(v);
        if inc.len() > 2 {
            violations.push(Violation::TooManyIncoming {
                vertex: p.vertex_name(v).to_string(),
                arrows: names(&inc),
            });
        }
        let out = q.outgoing(v);
        if out.len() > 2 {
            violations.push(Violation::TooManyOutgoing {
                vertex: p.vertex_name(v).to_string(),
                arrows: names(&out),
            });
        }
    }

    for a in 0..p.num_arrows() {
        let arrow = p.arrow_name(a).to_string();
        let checks = [
            (p.successors(a, true), 0),
            (p.predecessors(a, true), 1),
            (p.successors(a, false), 2),
            (p.predecessors(a, false), 3),
        ];
        for (witnesses, kind) in checks {
            if witnesses.len() > 1 {
                let witnesses = names(&witnesses);
                let arrow = arrow.clone();
                violations.push(match kind {
                    0 => Violation::RelationSuccessors { arrow, witnesses },
                    1 => Violation::RelationPredecessors { arrow, witnesses },
                    2 => Violation::FreeSuccessors { arrow, witnesses },
                    _ => Violation::FreePredecessors { arrow, witnesses },
                });
            }
        }
    }

    if let Some(cycle) = free_cycle(p) {
        violations.push(Violation::NotAdmissible { cycle: names(&cycle) });
    }
    ValidationReport { violations }
}

/// A cycle in the graph "b may follow a without a relation", if one exists.
fn free_cycle(p: &GentlePresentation) -> Option<Vec<usize>> {
    let m = p.num_arrows();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; m];
    let mut stack_path: Vec<usize> = Vec::new();

    fn dfs(
        p: &GentlePresentation,
        a: usize,
        state: &mut Vec<u8>,
        path: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        state[a] = 1;
        path.push(a);
        for b in p.successors(a, false) {
            if state[b] == 1 {
                let pos = path.iter().position(|&x| x == b).unwrap();
                return Some(path[pos..].to_vec());
            }
            if state[b] == 0 {
                if let Some(c) = dfs(p, b, state, path) {
                    return Some(c);
                }
            }
        }
        path.pop();
        state[a] = 2;
        None
    }

    for a in 0..m {
        if state[a] == 0 {
            if let Some(c) = dfs(p, a, &mut state, &mut stack_path) {
                return Some(c);
            }
        }
    }
    None
}

/// All admissible paths from `a` to `b`. Requires an admissible presentation.
pub fn paths_between(p: &GentlePresentation, a: usize, b: usize) -> Vec<Path> {
    all_paths_from(p, a).into_iter().filter(|u| u.end == b).collect()
}

fn all_paths_from(p: &GentlePresentation, a: usize) -> Vec<Path> {
    let mut out = vec![Path::trivial(a)];
    let mut frontier: Vec<Path> = p
        .quiver
        .outgoing(a)
        .into_iter()
        .map(|x| p.path(&[x]).unwrap())
        .collect();
    while let Some(u) = frontier.pop() {
        let last = *u.arrows.last().unwrap();
        for b in p.successors(last, false) {
            let mut arrows = u.arrows.clone();
            arrows.push(b);
            frontier.push(p.path(&arrows).unwrap());
        }
        out.push(u);
    }
    out.sort();
    out
}

/// Basis of the algebra: every admissible path, trivial ones included.
pub fn path_basis(p: &GentlePresentation) -> Vec<Path> {
    (0..p.num_vertices())
        .flat_map(|v| all_paths_from(p, v))
        .sorted()
        .collect()
}

/// Table of admissible paths between every ordered pair of vertices.
#[derive(Debug, Clone)]
pub struct PathTable {
    table: Vec<Vec<Vec<Path>>>,
}

impl PathTable {
    pub fn new(p: &GentlePresentation) -> Self {
        let n = p.num_vertices();
        let mut table = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for u in all_paths_from(p, a) {
                table[a][u.end].push(u);
            }
        }
        PathTable { table }
    }

    pub fn between(&self, a: usize, b: usize) -> &[Path] {
        &self.table[a][b]
    }
}

/// Permitted and forbidden threads plus the full relation cycles.
pub fn threads(p: &GentlePresentation) -> Threads {
    let q = &p.quiver;
    let n = p.num_vertices();

    let mut permitted = Vec::new();
    let mut occurrences = vec![0usize; n];
    for a in 0..p.num_arrows() {
        if p.free_predecessor(a).is_some() {
            continue;
        }
        let mut arrows = vec![a];
        let mut cur = a;
        while let Some(b) = p.free_successor(cur) {
            arrows.push(b);
            cur = b;
        }
        let t = Thread {
            kind: ThreadKind::Permitted,
            start: p.source(a),
            arrows,
            cyclic: false,
        };
        for v in t.vertices(q) {
            occurrences[v] += 1;
        }
        permitted.push(t);
    }
    for v in 0..n {
        for _ in occurrences[v]..2 {
            permitted.push(Thread {
                kind: ThreadKind::Permitted,
                start: v,
                arrows: Vec::new(),
                cyclic: false,
            });
        }
    }

    let mut forbidden = Vec::new();
    let mut f_occurrences = vec![0usize; n];
    let mut on_chain = vec![false; p.num_arrows()];
    for a in 0..p.num_arrows() {
        if p.relation_predecessor(a).is_some() {
            continue;
        }
        let mut arrows = vec![a];
        on_chain[a] = true;
        let mut cur = a;
        while let Some(b) = p.relation_successor(cur) {
            arrows.push(b);
            on_chain[b] = true;
            cur = b;
        }
        let t = Thread {
            kind: ThreadKind::Forbidden,
            start: p.source(a),
            arrows,
            cyclic: false,
        };
        for v in t.vertices(q) {
            f_occurrences[v] += 1;
        }
        forbidden.push(t);
    }
    let mut full_relation_cycles = Vec::new();
    for a in 0..p.num_arrows() {
        if on_chain[a] {
            continue;
        }
        let mut cycle = vec![a];
        on_chain[a] = true;
        let mut cur = a;
        loop {
            let b = p.relation_successor(cur).expect("relation cycle closes");
            if b == a {
                break;
            }
            cycle.push(b);
            on_chain[b] = true;
            cur = b;
        }
        let t = Thread {
            kind: ThreadKind::Forbidden,
            start: p.source(a),
            arrows: cycle.clone(),
            cyclic: true,
        };
        // an open cycle visits each of its vertices once as a through-vertex
        // and once more at the cut point
        for v in t.vertices(q) {
            f_occurrences[v] += 1;
        }
        forbidden.push(t);
        full_relation_cycles.push(least_rotation(&cycle));
    }
    for v in 0..n {
        for _ in f_occurrences[v]..2 {
            forbidden.push(Thread {
                kind: ThreadKind::Forbidden,
                start: v,
                arrows: Vec::new(),
                cyclic: false,
            });
        }
    }

    permitted.sort();
    forbidden.sort();
    full_relation_cycles.sort();
    Threads {
        permitted,
        forbidden,
        full_relation_cycles,
    }
}

/// A vertex map and an arrow map carrying `p` onto `q`, if the two
/// presentations agree up to renaming.
pub fn find_isomorphism(
    p: &GentlePresentation,
    q: &GentlePresentation,
) -> Option<(Vec<usize>, Vec<usize>)> {
    if p.num_vertices() != q.num_vertices()
        || p.num_arrows() != q.num_arrows()
        || p.relations.len() != q.relations.len()
    {
        return None;
    }
    let signature = |g: &GentlePresentation| {
        (0..g.num_vertices())
            .map(|v| (g.quiver.incoming(v).len(), g.quiver.outgoing(v).len()))
            .sorted()
            .collect_vec()
    };
    if signature(p) != signature(q) {
        return None;
    }

    struct Search<'a> {
        p: &'a GentlePresentation,
        q: &'a GentlePresentation,
        vmap: Vec<Option<usize>>,
        vused: Vec<bool>,
        amap: Vec<usize>,
        aused: Vec<bool>,
    }

    impl Search<'_> {
        fn bind(&mut self, x: usize, y: usize, bound: &mut Vec<usize>) -> bool {
            match self.vmap[x] {
                Some(z) => z == y,
                None if self.vused[y] => false,
                None => {
                    self.vmap[x] = Some(y);
                    self.vused[y] = true;
                    bound.push(x);
                    true
                }
            }
        }

        fn run(&mut self, a: usize) -> bool {
            if a == self.p.num_arrows() {
                return true;
            }
            let (s, t) = (self.p.source(a), self.p.target(a));
            for b in 0..self.q.num_arrows() {
                if self.aused[b] {
                    continue;
                }
                let mut bound = Vec::new();
                let ok = self.bind(s, self.q.source(b), &mut bound)
                    && self.bind(t, self.q.target(b), &mut bound)
                    && (0..a).all(|c| {
                        let d = self.amap[c];
                        self.p.is_relation(c, a) == self.q.is_relation(d, b)
                            && self.p.is_relation(a, c) == self.q.is_relation(b, d)
                    })
                    && self.p.is_relation(a, a) == self.q.is_relation(b, b);
                if ok {
                    self.amap[a] = b;
                    self.aused[b] = true;
                    if self.run(a + 1) {
                        return true;
                    }
                    self.aused[b] = false;
                }
                for x in bound {
                    let y = self.vmap[x].take().unwrap();
                    self.vused[y] = false;
                }
            }
            false
        }
    }

    let mut search = Search {
        p,
        q,
        vmap: vec![None; p.num_vertices()],
        vused: vec![false; q.num_vertices()],
        amap: vec![usize::MAX; p.num_arrows()],
        aused: vec![false; q.num_arrows()],
    };
    if !search.run(0) {
        return None;
    }
    let mut free = (0..q.num_vertices()).filter(|&y| !search.vused[y]);
    let vmap = search
        .vmap
        .iter()
        .map(|m| m.unwrap_or_else(|| free.next().expect("isolated vertices match")))
        .collect();
    Some((vmap, search.amap))
}

pub(crate) fn least_rotation<T: Ord + Clone>(xs: &[T]) -> Vec<T> {
    (0..xs.len().max(1))
        .map(|r| xs.iter().cycle().skip(r).take(xs.len()).cloned().collect_vec())
        .min()
        .unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::named;

    #[test]
    fn parses_a2() {
        let p = parse_presentation("vertices: 1 2\narrow a: 1 -> 2").unwrap();
        assert_eq!(p.num_vertices(), 2);
        assert_eq!(p.num_arrows(), 1);
        assert!(p.relations.is_empty());
    }

    #[test]
    fn parses_kronecker_with_comments() {
        let text = "# the Kronecker quiver\nvertices: x y\narrow a: x -> y\narrow b: x -> y   # second arrow\n";
        let p = parse_presentation(text).unwrap();
        assert_eq!(p.quiver.vertices, vec!["x", "y"]);
        assert_eq!(p.num_arrows(), 2);
    }

    #[test]
    fn rejects_non_composable_relation() {
        let err = parse_presentation("vertices: 1 2 3\narrow a: 1 -> 2\narrow b: 1 -> 3\nrel a b").unwrap_err();
        assert!(matches!(err, ParseError::NotComposable { line: 4, .. }));
    }

    #[test]
    fn reports_syntax_position() {
        let err = parse_presentation("vertices: 1 2\narrow a 1 -> 2").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
        let err = parse_presentation("vertices: 1\nfoo").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                line: 2,
                column: 1,
                message: "expected `vertices:`, `arrow` or `rel`".into()
            }
        );
    }

    #[test]
    fn rejects_duplicates_and_undeclared() {
        assert!(matches!(
            parse_presentation("vertices: 1 1").unwrap_err(),
            ParseError::DuplicateId { .. }
        ));
        assert!(matches!(
            parse_presentation("vertices: 1\narrow a: 1 -> 2").unwrap_err(),
            ParseError::UndeclaredVertex { .. }
        ));
        assert!(matches!(
            parse_presentation("vertices: 1\narrow a: 1 -> 1\nrel a c").unwrap_err(),
            ParseError::UndeclaredArrow { .. }
        ));
    }

    #[test]
    fn emit_round_trips() {
        for (_, p) in named::all() {
            let again = parse_presentation(&p.emit()).unwrap();
            assert_eq!(again, p);
        }
    }

    #[test]
    fn validation_of_named_examples() {
        for (name, p) in named::all() {
            assert!(validate_gentle(&p).is_ok(), "{name}: {:?}", validate_gentle(&p));
        }
        let loop_free = GentlePresentation::new(&["1"], &[("a", "1", "1")], &[]);
        let report = validate_gentle(&loop_free);
        assert_eq!(
            report.violations,
            vec![Violation::NotAdmissible { cycle: vec!["a".into()] }]
        );
    }

    #[test]
    fn validation_names_witnesses() {
        // three arrows into one vertex and a doubly related arrow
        let p = GentlePresentation::new(
            &["1", "2", "3", "4", "5"],
            &[("a", "1", "4"), ("b", "2", "4"), ("c", "3", "4"), ("d", "4", "5")],
            &[("a", "d"), ("b", "d")],
        );
        let report = validate_gentle(&p);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::TooManyIncoming { vertex, .. } if vertex == "4")));
        assert!(report.violations.iter().any(
            |v| matches!(v, Violation::RelationPredecessors { arrow, witnesses } if arrow == "d" && witnesses.len() == 2)
        ));
    }

    /// Independent count: walk every arrow word up to a length bound and
    /// keep the ones avoiding relations.
    fn brute_force_dim(p: &GentlePresentation, max_len: usize) -> usize {
        let mut count = p.num_vertices();
        let mut layer: Vec<Vec<usize>> = (0..p.num_arrows()).map(|a| vec![a]).collect();
        for _ in 0..max_len {
            count += layer.len();
            let mut next = Vec::new();
            for w in &layer {
                let last = *w.last().unwrap();
                for b in 0..p.num_arrows() {
                    if p.target(last) == p.source(b) && !p.is_relation(last, b) {
                        let mut w2 = w.clone();
                        w2.push(b);
                        next.push(w2);
                    }
                }
            }
            layer = next;
        }
        assert!(layer.is_empty(), "length bound too small");
        count
    }

    #[test]
    fn path_basis_dimensions() {
        assert_eq!(path_basis(&named::a2()).len(), 3);
        assert_eq!(path_basis(&named::dual_numbers()).len(), 2);
        assert_eq!(path_basis(&named::kronecker()).len(), 4);
        for (_, p) in named::all() {
            assert_eq!(path_basis(&p).len(), brute_force_dim(&p, 12));
            for u in path_basis(&p) {
                assert!(p.is_admissible_path(&u));
            }
        }
    }

    #[test]
    fn thread_examples() {
        let k = named::kronecker();
        let t = threads(&k);
        assert_eq!(t.permitted.len(), 2);
        assert!(t.permitted.iter().all(|t| t.arrows.len() == 1));
        assert!(t.full_relation_cycles.is_empty());

        let d = named::dual_numbers();
        let t = threads(&d);
        assert_eq!(t.permitted.len(), 1);
        assert_eq!(t.permitted[0].arrows, vec![0]);
        assert_eq!(t.full_relation_cycles, vec![vec![0]]);
        assert!(t.forbidden.iter().any(|f| f.cyclic && f.arrows == vec![0]));

        let a2 = named::a2();
        let t = threads(&a2);
        assert_eq!(t.permitted.len(), 3);
        assert_eq!(t.permitted.iter().filter(|t| t.is_trivial()).count(), 2);
    }

    #[test]
    fn two_occurrence_law_on_named() {
        for (name, p) in named::all() {
            let t = threads(&p);
            let mut occ = vec![0; p.num_vertices()];
            for th in &t.permitted {
                for v in th.vertices(&p.quiver) {
                    occ[v] += 1;
                }
            }
            assert!(occ.iter().all(|&c| c == 2), "{name}: {occ:?}");
            assert_eq!(t.permitted.len(), 2 * p.num_vertices() - p.num_arrows());
        }
    }

    #[test]
    fn multiply_respects_relations() {
        let d = named::dual_numbers();
        let a = d.path(&[0]).unwrap();
        assert_eq!(d.multiply(&a, &a), None);
        let e = Path::trivial(0);
        assert_eq!(d.multiply(&e, &a), Some(a.clone()));
    }

    #[test]
    fn isomorphism_search() {
        let k = named::kronecker();
        let r = k.relabel(&[1, 0], &[1, 0], "z");
        let (vm, am) = find_isomorphism(&k, &r).unwrap();
        assert_eq!(vm, vec![1, 0]);
        assert_eq!(am.len(), 2);
        assert!(find_isomorphism(&named::a3_linear(), &named::a3_with_relation()).is_none());
        assert!(find_isomorphism(&named::a3_linear(), &named::a3_zigzag()).is_none());
    }

    #[test]
    fn canonical_json_is_sorted() {
        let p = GentlePresentation::new(&["y", "x"], &[("b", "x", "y"), ("a", "x", "y")], &[]);
        let j = p.to_canonical_json();
        assert_eq!(j["arrows"][0]["id"], "a");
        assert_eq!(j["vertices"][0], "x");
    }
}
