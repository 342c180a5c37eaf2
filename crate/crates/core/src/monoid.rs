//! Finitely presented commutative monoids.
//!
//! Elements are nonnegative integer vectors over the generators; a relation
//! `lhs = rhs` allows replacing an embedded `lhs` by `rhs` (or back) inside
//! any larger vector. Equality is decided by bounded search and reported
//! tri-state, so an answer of `No` is only given with a certificate.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::matrix::IntMatrix;
use crate::snf::smith_normal_form;

/// Upper bound on vectors held by one search before it gives up.
const MAX_SEARCH_STATES: usize = 200_000;
/// Upper bound on forward rewrites when reducing a vector toward a normal form.
const MAX_REDUCTION_STEPS: usize = 1_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("relation {index}: vectors must have length {expected}")]
    RelationLength { index: usize, expected: usize },
    #[error("generator name `{0}` is empty, repeated, or contains whitespace, `+`, `=` or `*`")]
    BadGeneratorName(String),
    #[error("element has length {found}, expected {expected}")]
    ElementLength { found: usize, expected: usize },
    #[error("the sink-zero presentation needs a sandpile graph")]
    NotSandpile,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Relation {
    pub lhs: Vec<u64>,
    pub rhs: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonoidPresentation {
    generators: Vec<String>,
    relations: Vec<Relation>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '+' | '=' | '*' | '#'))
}

impl MonoidPresentation {
    /// Relations equating a vector with itself are dropped.
    pub fn new(generators: Vec<String>, relations: Vec<Relation>) -> Result<Self, MonoidError> {
        let mut seen = std::collections::HashSet::new();
        for g in &generators {
            if !valid_name(g) || !seen.insert(g.as_str()) {
                return Err(MonoidError::BadGeneratorName(g.clone()));
            }
        }
        let n = generators.len();
        for (index, r) in relations.iter().enumerate() {
            if r.lhs.len() != n || r.rhs.len() != n {
                return Err(MonoidError::RelationLength { index, expected: n });
            }
        }
        let relations = relations.into_iter().filter(|r| r.lhs != r.rhs).collect();
        Ok(MonoidPresentation {
            generators,
            relations,
        })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn unit_vector(&self, g: usize) -> Vec<u64> {
        let mut v = self.zero();
        v[g] = 1;
        v
    }

    /// Sum of all generators.
    pub fn order_unit(&self) -> Vec<u64> {
        vec![1; self.rank()]
    }

    pub fn check_element(&self, x: &[u64]) -> Result<(), MonoidError> {
        if x.len() != self.rank() {
            return Err(MonoidError::ElementLength {
                found: x.len(),
                expected: self.rank(),
            });
        }
        Ok(())
    }

    /// Parses a term such as `2a+b`, `3*x` or `0`.
    pub fn parse_term(&self, text: &str) -> Result<Vec<u64>, MonoidError> {
        parse_term(&self.generators, text, 0)
    }

    pub fn format_term(&self, x: &[u64]) -> String {
        format_term(&self.generators, x)
    }

    /// `gens: a b c` header followed by one `lhs = rhs` line per relation.
    pub fn to_text(&self) -> String {
        let mut s = format!("gens: {}\n", self.generators.join(" "));
        for r in &self.relations {
            writeln!(s, "{} = {}", self.format_term(&r.lhs), self.format_term(&r.rhs)).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, MonoidError> {
        let mut generators: Option<Vec<String>> = None;
        let mut relations = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            match &generators {
                None => {
                    let rest = content.strip_prefix("gens:").ok_or(MonoidError::Parse {
                        line,
                        message: "expected `gens: <names>` header".into(),
                    })?;
                    generators = Some(rest.split_whitespace().map(str::to_string).collect());
                }
                Some(gens) => {
                    let (l, r) = content.split_once('=').ok_or(MonoidError::Parse {
                        line,
                        message: "expected `lhs = rhs`".into(),
                    })?;
                    relations.push(Relation {
                        lhs: parse_term(gens, l, line)?,
                        rhs: parse_term(gens, r, line)?,
                    });
                }
            }
        }
        let generators = generators.ok_or(MonoidError::Parse {
            line: 1,
            message: "missing `gens:` header".into(),
        })?;
        MonoidPresentation::new(generators, relations)
    }

    /// One-step rewrites of `x`: every relation applied forward and backward where it embeds.
    fn neighbours(&self, x: &[u64]) -> Vec<(Vec<u64>, usize, bool)> {
        let mut out = Vec::new();
        for (i, r) in self.relations.iter().enumerate() {
            for (forward, from, to) in [(true, &r.lhs, &r.rhs), (false, &r.rhs, &r.lhs)] {
                if let Some(y) = rewrite(x, from, to) {
                    out.push((y, i, forward));
                }
            }
        }
        out
    }

    /// The first relation (in order) whose left side embeds, applied forward.
    fn reduce_once(&self, x: &[u64]) -> Option<Vec<u64>> {
        self.relations.iter().find_map(|r| rewrite(x, &r.lhs, &r.rhs))
    }

    /// Abelian group obtained by making the relations invertible.
    pub fn group_completion(&self) -> GroupCompletion {
        let n = self.rank();
        if self.relations.is_empty() || n == 0 {
            return GroupCompletion {
                torsion: Vec::new(),
                free_rank: n,
            };
        }
        let data = self
            .relations
            .iter()
            .flat_map(|r| r.lhs.iter().zip(&r.rhs).map(|(&a, &b)| BigInt::from(a) - BigInt::from(b)))
            .collect();
        let m = IntMatrix::new(self.relations.len(), n, data).expect("relation matrix shape");
        let snf = smith_normal_form(&m);
        GroupCompletion {
            torsion: snf.torsion(),
            free_rank: n - snf.rank,
        }
    }
}

fn rewrite(x: &[u64], from: &[u64], to: &[u64]) -> Option<Vec<u64>> {
    if x.iter().zip(from).all(|(a, b)| a >= b) {
        Some(x.iter().zip(from).zip(to).map(|((a, f), t)| a - f + t).collect())
    } else {
        None
    }
}

fn parse_term(gens: &[String], text: &str, line: usize) -> Result<Vec<u64>, MonoidError> {
    let mut v = vec![0u64; gens.len()];
    let text = text.trim();
    if text == "0" {
        return Ok(v);
    }
    let bad = |message: String| MonoidError::Parse { line, message };
    for part in text.split('+') {
        let part = part.trim();
        let (coef, name) = match part.split_once('*') {
            Some((c, n)) => (c.trim(), n.trim()),
            None => {
                let split = part.find(|c: char| !c.is_ascii_digit()).unwrap_or(part.len());
                (&part[..split], &part[split..])
            }
        };
        let coef: u64 = if coef.is_empty() {
            1
        } else {
            coef.parse().map_err(|_| bad(format!("bad coefficient in `{part}`")))?
        };
        let g = gens
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| MonoidError::UnknownGenerator(name.to_string()))?;
        v[g] += coef;
    }
    Ok(v)
}

fn format_term(gens: &[String], x: &[u64]) -> String {
    let parts: Vec<String> = gens
        .iter()
        .zip(x)
        .filter(|(_, &c)| c > 0)
        .map(|(g, &c)| {
            let digit_led = g.starts_with(|ch: char| ch.is_ascii_digit());
            match (c, digit_led) {
                (1, false) => g.clone(),
                (_, true) => format!("{c}*{g}"),
                _ => format!("{c}{g}"),
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupCompletion {
    /// Nontrivial invariant factors.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

/// The presentation `w(v)·v = Σ r(e)` over the non-sink vertices `v`.
///
/// Unweighted uses `w ≡ 1`; weighted uses the graph's weights, defaulting to
/// outdegrees. With `sink_zero` the sink generator is removed and its
/// occurrences erased.
pub fn graph_monoid_presentation(
    g: &Graph,
    weighted: bool,
    sink_zero: bool,
) -> Result<MonoidPresentation, MonoidError> {
    let dropped = if sink_zero {
        Some(g.sandpile_sink().ok_or(MonoidError::NotSandpile)?)
    } else {
        None
    };
    let kept: Vec<usize> = (0..g.vertex_count()).filter(|&v| Some(v) != dropped).collect();
    let slot: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut relations = Vec::new();
    for &v in &kept {
        if g.is_sink(v) {
            continue;
        }
        let mut lhs = vec![0u64; kept.len()];
        lhs[slot[&v]] = if weighted { g.weight(v) } else { 1 };
        let mut rhs = vec![0u64; kept.len()];
        for &(t, m) in g.out_edges(v) {
            if let Some(&k) = slot.get(&t) {
                rhs[k] += m;
            }
        }
        relations.push(Relation { lhs, rhs });
    }
    MonoidPresentation::new(kept.iter().map(|&v| g.name(v).to_string()).collect(), relations)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub relation: usize,
    /// `true` when `lhs` was replaced by `rhs`.
    pub forward: bool,
    pub result: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewritePath {
    pub start: Vec<u64>,
    pub steps: Vec<RewriteStep>,
}

impl RewritePath {
    /// Replays every step against the presentation; returns the final vector
    /// when each step is a legal one-step rewrite.
    pub fn replay(&self, p: &MonoidPresentation) -> Option<Vec<u64>> {
        let mut cur = self.start.clone();
        for s in &self.steps {
            let r = p.relations.get(s.relation)?;
            let next = if s.forward {
                rewrite(&cur, &r.lhs, &r.rhs)?
            } else {
                rewrite(&cur, &r.rhs, &r.lhs)?
            };
            if next != s.result {
                return None;
            }
            cur = next;
        }
        Some(cur)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum WordVerdict {
    Yes { path: RewritePath },
    /// One of the two congruence classes was exhausted without meeting the other.
    No,
    /// The depth or state bound was hit first.
    Unknown,
}

type Parents = HashMap<Vec<u64>, Option<(Vec<u64>, usize, bool)>>;

struct Side {
    parents: Parents,
    frontier: Vec<Vec<u64>>,
}

impl Side {
    fn new(start: &[u64]) -> Self {
        let mut parents = HashMap::new();
        parents.insert(start.to_vec(), None);
        Side {
            parents,
            frontier: vec![start.to_vec()],
        }
    }

    /// Steps from the side's root to `node`, in root-to-node order.
    fn path_to(&self, node: &[u64]) -> Vec<(Vec<u64>, usize, bool, Vec<u64>)> {
        let mut steps = Vec::new();
        let mut cur = node.to_vec();
        while let Some(Some((prev, rel, fwd))) = self.parents.get(&cur) {
            steps.push((prev.clone(), *rel, *fwd, cur.clone()));
            cur = prev.clone();
        }
        steps.reverse();
        steps
    }
}

/// Bidirectional breadth-first search for a rewrite path from `x` to `y`
/// of length at most `depth`.
pub fn words_equal(p: &MonoidPresentation, x: &[u64], y: &[u64], depth: usize) -> WordVerdict {
    assert_eq!(x.len(), p.rank());
    assert_eq!(y.len(), p.rank());
    if x == y {
        return WordVerdict::Yes {
            path: RewritePath {
                start: x.to_vec(),
                steps: Vec::new(),
            },
        };
    }
    let mut sides = [Side::new(x), Side::new(y)];
    let mut radius = 0;
    loop {
        if sides.iter().any(|s| s.frontier.is_empty()) {
            return WordVerdict::No;
        }
        if radius >= depth {
            return WordVerdict::Unknown;
        }
        let k = if sides[0].frontier.len() <= sides[1].frontier.len() { 0 } else { 1 };
        let frontier = std::mem::take(&mut sides[k].frontier);
        let mut next = Vec::new();
        for node in frontier {
            for (nb, rel, fwd) in p.neighbours(&node) {
                if sides[k].parents.contains_key(&nb) {
                    continue;
                }
                sides[k].parents.insert(nb.clone(), Some((node.clone(), rel, fwd)));
                if sides[1 - k].parents.contains_key(&nb) {
                    return WordVerdict::Yes {
                        path: join_paths(&sides[0], &sides[1], &nb),
                    };
                }
                next.push(nb);
            }
        }
        sides[k].frontier = next;
        radius += 1;
        if sides[0].parents.len() + sides[1].parents.len() > MAX_SEARCH_STATES {
            return WordVerdict::Unknown;
        }
    }
}

fn join_paths(from_x: &Side, from_y: &Side, meet: &[u64]) -> RewritePath {
    let head = from_x.path_to(meet);
    let tail = from_y.path_to(meet);
    let start = head.first().map_or_else(|| meet.to_vec(), |s| s.0.clone());
    let mut steps: Vec<RewriteStep> = head
        .into_iter()
        .map(|(_, relation, forward, result)| RewriteStep {
            relation,
            forward,
            result,
        })
        .collect();
    // y-side steps run y -> meet; walk them backwards with inverted direction
    for (prev, relation, forward, _) in tail.into_iter().rev() {
        steps.push(RewriteStep {
            relation,
            forward: !forward,
            result: prev,
        });
    }
    RewritePath { start, steps }
}

/// A finite commutative monoid given by its Cayley table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonoidTable {
    pub generators: Vec<String>,
    /// One representative vector per element.
    pub elements: Vec<Vec<u64>>,
    /// Element represented by each generator.
    pub generator_elements: Vec<usize>,
    pub addition: Vec<Vec<usize>>,
    pub identity: usize,
}

impl MonoidTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.addition[a][b]
    }

    /// The element named by a coefficient vector over the generators.
    pub fn evaluate(&self, coeffs: &[u64]) -> usize {
        let mut acc = self.identity;
        for (&g, &c) in self.generator_elements.iter().zip(coeffs) {
            for _ in 0..c {
                acc = self.add(acc, g);
            }
        }
        acc
    }

    /// Associativity, commutativity and the identity law, checked exhaustively.
    pub fn check_laws(&self) -> bool {
        let n = self.len();
        let e = self.identity;
        (0..n).all(|a| self.add(a, e) == a && self.add(e, a) == a)
            && (0..n).all(|a| (0..n).all(|b| self.add(a, b) == self.add(b, a)))
            && (0..n).all(|a| {
                (0..n).all(|b| (0..n).all(|c| self.add(self.add(a, b), c) == self.add(a, self.add(b, c))))
            })
    }

    /// Whether `map` (indexed by this table's elements) is an isomorphism onto `other`.
    pub fn is_isomorphism(&self, other: &MonoidTable, map: &[usize]) -> bool {
        let n = self.len();
        if other.len() != n || map.len() != n || map.iter().any(|&m| m >= n) {
            return false;
        }
        let mut hit = vec![false; n];
        for &m in map {
            if std::mem::replace(&mut hit[m], true) {
                return false;
            }
        }
        map[self.identity] == other.identity
            && (0..n).all(|a| (0..n).all(|b| map[self.add(a, b)] == other.add(map[a], map[b])))
    }

    /// Searches generator images for an isomorphism onto `other`, optionally
    /// required to send `unit.0` to `unit.1`, trying at most `max_candidates`
    /// generator assignments.
    pub fn find_isomorphism(&self, other: &MonoidTable, unit: Option<(usize, usize)>, max_candidates: u64) -> IsoSearch {
        let n = self.len();
        if other.len() != n {
            return IsoSearch::NoneExists;
        }
        let k = self.generator_elements.len();
        let mut images = vec![0usize; k];
        let mut tried = 0u64;
        loop {
            tried += 1;
            if tried > max_candidates {
                return IsoSearch::GaveUp;
            }
            let map: Vec<usize> = self
                .elements
                .iter()
                .map(|rep| {
                    let mut acc = other.identity;
                    for (&img, &c) in images.iter().zip(rep) {
                        for _ in 0..c {
                            acc = other.add(acc, img);
                        }
                    }
                    acc
                })
                .collect();
            let unit_ok = unit.is_none_or(|(a, b)| map[a] == b);
            if unit_ok && self.is_isomorphism(other, &map) {
                return IsoSearch::Found(map);
            }
            // next assignment in lexicographic order
            let mut pos = k;
            loop {
                if pos == 0 {
                    return IsoSearch::NoneExists;
                }
                pos -= 1;
                images[pos] += 1;
                if images[pos] < n {
                    break;
                }
                images[pos] = 0;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoSearch {
    /// Element map of an isomorphism.
    Found(Vec<usize>),
    /// Every generator assignment was tried.
    NoneExists,
    GaveUp,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum EnumerationFailure {
    #[error("more than {cap} distinct elements without closing")]
    TooManyElements { cap: usize },
    #[error("the closed candidate table does not satisfy the relations; some equalities lie beyond the search depth")]
    Inconsistent,
}

/// Breadth-first generation of the monoid from 0 by adding generators.
///
/// Each candidate `rep + g` is merged into an existing element when a chain of
/// rewrites connects them: first by forward reduction, then by a breadth-first
/// search of radius `depth`. Unmerged candidates become new elements. Once the
/// generation closes, the resulting table is accepted only if the generator
/// actions commute and every relation holds in it; the table is then a
/// quotient of the presented monoid, which together with the certified merges
/// makes it isomorphic to it. Each element's representative is the
/// lexicographically least vector found in its class.
pub fn enumerate_monoid(
    p: &MonoidPresentation,
    max_elements: usize,
    depth: usize,
) -> Result<MonoidTable, EnumerationFailure> {
    let k = p.rank();
    let mut known: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut reps: Vec<Vec<u64>> = vec![p.zero()];
    known.insert(p.zero(), 0);
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut a = 0;
    while a < reps.len() {
        let mut row = Vec::with_capacity(k);
        for g in 0..k {
            let mut c = reps[a].clone();
            c[g] += 1;
            let e = match resolve(p, &known, &c, depth) {
                Resolved::Known(e, seen) => {
                    for v in seen {
                        known.entry(v).or_insert(e);
                    }
                    e
                }
                Resolved::Fresh(seen) => {
                    let e = reps.len();
                    if e >= max_elements {
                        return Err(EnumerationFailure::TooManyElements { cap: max_elements });
                    }
                    reps.push(c.clone());
                    known.insert(c, e);
                    for v in seen {
                        known.entry(v).or_insert(e);
                    }
                    e
                }
            };
            row.push(e);
        }
        succ.push(row);
        a += 1;
    }
    let n = reps.len();
    let act = |mut e: usize, coeffs: &[u64]| {
        for (g, &c) in coeffs.iter().enumerate() {
            for _ in 0..c {
                e = succ[e][g];
            }
        }
        e
    };
    let commute = (0..n).all(|e| (0..k).all(|g| (0..k).all(|h| succ[succ[e][g]][h] == succ[succ[e][h]][g])));
    let relations_hold = p.relations.iter().all(|r| act(0, &r.lhs) == act(0, &r.rhs));
    if !commute || !relations_hold {
        return Err(EnumerationFailure::Inconsistent);
    }
    let mut best: Vec<Vec<u64>> = reps.clone();
    for (v, &e) in &known {
        if *v < best[e] {
            best[e] = v.clone();
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| best[x].cmp(&best[y]));
    let mut new_index = vec![0; n];
    for (i, &old) in order.iter().enumerate() {
        new_index[old] = i;
    }
    let elements: Vec<Vec<u64>> = order.iter().map(|&old| best[old].clone()).collect();
    let addition = order
        .iter()
        .map(|&x| order.iter().map(|&y| new_index[act(x, &reps[y])]).collect())
        .collect();
    Ok(MonoidTable {
        generators: p.generators.clone(),
        elements,
        generator_elements: (0..k).map(|g| new_index[succ[0][g]]).collect(),
        addition,
        identity: new_index[0],
    })
}

enum Resolved {
    /// Equal to an existing element; carries further vectors proven equal to it.
    Known(usize, Vec<Vec<u64>>),
    /// No link to an existing element found; carries vectors proven equal to the candidate.
    Fresh(Vec<Vec<u64>>),
}

fn resolve(p: &MonoidPresentation, known: &HashMap<Vec<u64>, usize>, c: &[u64], depth: usize) -> Resolved {
    if let Some(&e) = known.get(c) {
        return Resolved::Known(e, Vec::new());
    }
    // forward reduction
    let mut path = vec![c.to_vec()];
    let mut terminated = false;
    for _ in 0..MAX_REDUCTION_STEPS {
        let Some(next) = p.reduce_once(path.last().expect("nonempty")) else {
            terminated = true;
            break;
        };
        if let Some(&e) = known.get(&next) {
            return Resolved::Known(e, path);
        }
        path.push(next);
    }
    // breadth-first search of the class
    let mut seen: HashMap<Vec<u64>, ()> = HashMap::new();
    seen.insert(c.to_vec(), ());
    let mut queue = VecDeque::from([(c.to_vec(), 0usize)]);
    while let Some((x, d)) = queue.pop_front() {
        if d == depth || seen.len() > MAX_SEARCH_STATES {
            continue;
        }
        for (y, _, _) in p.neighbours(&x) {
            if seen.contains_key(&y) {
                continue;
            }
            if let Some(&e) = known.get(&y) {
                let mut proven: Vec<Vec<u64>> = seen.into_keys().collect();
                if terminated {
                    proven.extend(path);
                }
                return Resolved::Known(e, proven);
            }
            seen.insert(y.clone(), ());
            queue.push_back((y, d + 1));
        }
    }
    let mut proven: Vec<Vec<u64>> = seen.into_keys().collect();
    if terminated {
        proven.extend(path);
    }
    Resolved::Fresh(proven)
}
