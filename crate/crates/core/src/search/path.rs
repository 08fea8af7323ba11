//! Flip paths between cubications.
//!
//! States are isomorphism classes, stored as canonically relabelled
//! complexes keyed by canonical code. Two breadth-first searches grow from
//! the endpoints, the smaller frontier first, until a class is reached from
//! both sides. The face cap starts at the larger endpoint and is raised by
//! two up to the budget, so short paths through small complexes are found
//! before the state space of the full cap is explored.
//!
//! A path found between canonical representatives is replayed on the actual
//! source: every step is moved onto the current complex by an explicit
//! isomorphism, and the end of the replay must have the target's code.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::canon::{canonical_code, canonical_form, isomorphism, CanonicalCode};
use crate::flips::{
    apply_flip_unmarked, inverse_site, rewrite_sites, site_at, FlipError, FlipKind, FlipSite,
};
use crate::gmap::{Dart, QuadGMap};
use crate::surface::{boundary_signature, classify_surface, BoundarySignature, SurfaceClass};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest face count allowed for intermediate complexes.
    pub max_faces: usize,
    /// Cap on canonical codes visited in one round.
    pub max_states: usize,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub fn new(max_faces: usize, max_states: usize) -> Self {
        Self { max_faces, max_states, time_limit: None }
    }

    /// Default headroom: two b1 expansions above the larger endpoint.
    pub fn for_endpoints(a: &QuadGMap, b: &QuadGMap) -> Self {
        Self::new(a.n_faces().max(b.n_faces()) + 8, 1_000_000)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BudgetDimension {
    Faces,
    States,
    Time,
}

impl fmt::Display for BudgetDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BudgetDimension::Faces => "max_faces",
            BudgetDimension::States => "max_states",
            BudgetDimension::Time => "time",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PathOutcome {
    /// Flip sites, each on the complex produced by the previous ones.
    Found(Vec<FlipSite>),
    Exhausted(BudgetDimension),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathResult {
    pub outcome: PathOutcome,
    pub states_visited: usize,
}

impl PathResult {
    pub fn sites(&self) -> Option<&[FlipSite]> {
        match &self.outcome {
            PathOutcome::Found(s) => Some(s),
            PathOutcome::Exhausted(_) => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("endpoints lie on different surfaces ({0} and {1})")]
    SurfaceMismatch(String, String),
    #[error("endpoints have different boundary signatures ({0} and {1})")]
    BoundaryMismatch(String, String),
    #[error("endpoint is not a closed-up surface: {0}")]
    Topology(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<FlipError> for SearchError {
    fn from(e: FlipError) -> Self {
        SearchError::Internal(e.to_string())
    }
}

/// Flips of a complex whose result stays within a face cap, in a fixed
/// order: by kind, then anchor. Each flip is checked against the invariants it
/// must keep.
pub(crate) fn neighbours(
    q: &QuadGMap,
    kinds: &[FlipKind],
    cap: usize,
    class: &SurfaceClass,
    sig: &BoundarySignature,
) -> Result<Vec<(FlipKind, Dart, QuadGMap)>, SearchError> {
    let mut out = Vec::new();
    for &kind in kinds {
        let rw = kind.rewrite();
        for (anchor, _, sub) in rewrite_sites(q, rw) {
            let r = sub.result;
            if r.n_faces() > cap {
                continue;
            }
            let same = r.n_faces() % 2 == q.n_faces() % 2
                && &boundary_signature(&r) == sig
                && classify_surface(&r).ok().as_ref() == Some(class);
            if !same {
                return Err(SearchError::Internal(format!("{kind} at {anchor} changed an invariant")));
            }
            out.push((kind, anchor, r));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Source,
    Target,
}

struct Node {
    q: QuadGMap,
    side: Side,
    /// Node this one was reached from, and the flip on that node's complex.
    parent: Option<(usize, FlipKind, Dart)>,
}

enum Round {
    /// The flip `(kind, anchor)` on node `from` reaches the class of node
    /// `to`, which was found from the other end.
    Met { from: usize, kind: FlipKind, anchor: Dart, to: usize },
    Same,
    Exhausted(BudgetDimension),
}

struct Bfs<'a> {
    nodes: Vec<Node>,
    index: HashMap<CanonicalCode, usize>,
    class: &'a SurfaceClass,
    sig: &'a BoundarySignature,
}

impl Bfs<'_> {
    fn add(&mut self, code: CanonicalCode, node: Node) -> usize {
        let id = self.nodes.len();
        self.nodes.push(node);
        self.index.insert(code, id);
        id
    }

    fn run(&mut self, a: &QuadGMap, b: &QuadGMap, cap: usize, budget: &Budget, started: Instant) -> Result<Round, SearchError> {
        let topo = |e: crate::surface::TopologyError| SearchError::Topology(e.to_string());
        let fa = canonical_form(a).map_err(topo)?;
        let fb = canonical_form(b).map_err(topo)?;
        if fa.code == fb.code {
            return Ok(Round::Same);
        }
        let ia = self.add(fa.code, Node { q: a.relabel(&fa.labels), side: Side::Source, parent: None });
        let ib = self.add(fb.code, Node { q: b.relabel(&fb.labels), side: Side::Target, parent: None });
        let mut fronts = [vec![ia], vec![ib]];
        while !fronts[0].is_empty() && !fronts[1].is_empty() {
            let k = if fronts[0].len() <= fronts[1].len() { 0 } else { 1 };
            let side = if k == 0 { Side::Source } else { Side::Target };
            let mut next = Vec::new();
            for &x in &fronts[k] {
                if budget.time_limit.is_some_and(|t| started.elapsed() > t) {
                    return Ok(Round::Exhausted(BudgetDimension::Time));
                }
                for (kind, anchor, r) in neighbours(&self.nodes[x].q, &FlipKind::ALL, cap, self.class, self.sig)? {
                    let form = canonical_form(&r).map_err(|e| SearchError::Internal(e.to_string()))?;
                    if let Some(&y) = self.index.get(&form.code) {
                        if self.nodes[y].side != side {
                            return Ok(Round::Met { from: x, kind, anchor, to: y });
                        }
                        continue;
                    }
                    if self.nodes.len() >= budget.max_states {
                        return Ok(Round::Exhausted(BudgetDimension::States));
                    }
                    let parent = Some((x, kind, anchor));
                    next.push(self.add(form.code, Node { q: r.relabel(&form.labels), side, parent }));
                }
            }
            fronts[k] = next;
        }
        Ok(Round::Exhausted(BudgetDimension::Faces))
    }

    /// The route from the source root to the target root as flips on
    /// canonical complexes: `(base, kind, anchor, forward)`. A backward step
    /// undoes the flip `(kind, anchor)` on `base`.
    fn route(&self, from: usize, kind: FlipKind, anchor: Dart, to: usize) -> Vec<(usize, FlipKind, Dart, bool)> {
        let chain = |mut x: usize| {
            let mut out = Vec::new();
            while let Some((p, k, a)) = self.nodes[x].parent {
                out.push((p, k, a));
                x = p;
            }
            out
        };
        let (src_end, tgt_end, bridge) = if self.nodes[from].side == Side::Source {
            (from, to, (from, kind, anchor, true))
        } else {
            (to, from, (from, kind, anchor, false))
        };
        let mut steps: Vec<_> = chain(src_end).into_iter().rev().map(|(p, k, a)| (p, k, a, true)).collect();
        steps.push(bridge);
        steps.extend(chain(tgt_end).into_iter().map(|(p, k, a)| (p, k, a, false)));
        steps
    }
}

/// Moves the site `(kind, anchor)` of `base` onto `cur`, an isomorphic
/// complex.
fn transport(base: &QuadGMap, kind: FlipKind, anchor: Dart, cur: &QuadGMap) -> Result<FlipSite, SearchError> {
    let site = site_at(base, kind, anchor)?;
    let phi = isomorphism(base, cur)
        .map_err(|e| SearchError::Internal(e.to_string()))?
        .ok_or_else(|| SearchError::Internal("replay left the recorded class".into()))?;
    let moved = kind
        .rewrite()
        .root_orbit
        .iter()
        .map(|&r| phi[site.image[r as usize] as usize])
        .min()
        .expect("nonempty root orbit");
    Ok(site_at(cur, kind, moved)?)
}

fn replay_route(bfs: &Bfs<'_>, a: &QuadGMap, route: &[(usize, FlipKind, Dart, bool)]) -> Result<(Vec<FlipSite>, QuadGMap), SearchError> {
    let mut cur = a.clone();
    let mut sites = Vec::with_capacity(route.len());
    for &(base, kind, anchor, forward) in route {
        let base = &bfs.nodes[base].q;
        let site = if forward {
            transport(base, kind, anchor, &cur)?
        } else {
            let (after, inv) = inverse_site(base, &site_at(base, kind, anchor)?)?;
            transport(&after, inv.kind, inv.anchor, &cur)?
        };
        cur = apply_flip_unmarked(&cur, &site)?;
        sites.push(site);
    }
    Ok((sites, cur))
}

/// Searches for a flip sequence turning `a` into a complex isomorphic to
/// `b`. Deterministic for given inputs and budget.
pub fn flip_path(a: &QuadGMap, b: &QuadGMap, budget: &Budget) -> Result<PathResult, SearchError> {
    let topo = |e: crate::surface::TopologyError| SearchError::Topology(e.to_string());
    let class = classify_surface(a).map_err(topo)?;
    let class_b = classify_surface(b).map_err(topo)?;
    if class != class_b {
        return Err(SearchError::SurfaceMismatch(class.name(), class_b.name()));
    }
    let sig = boundary_signature(a);
    let sig_b = boundary_signature(b);
    if sig != sig_b {
        return Err(SearchError::BoundaryMismatch(sig.to_string(), sig_b.to_string()));
    }
    let started = Instant::now();
    let target = canonical_code(b).map_err(topo)?;
    let lowest = a.n_faces().max(b.n_faces());
    let mut visited = 0;
    let mut cap = lowest;
    loop {
        let mut bfs = Bfs { nodes: Vec::new(), index: HashMap::new(), class: &class, sig: &sig };
        let round = bfs.run(a, b, cap, budget, started)?;
        visited += bfs.nodes.len();
        let route = match round {
            Round::Same => Vec::new(),
            Round::Met { from, kind, anchor, to } => bfs.route(from, kind, anchor, to),
            Round::Exhausted(BudgetDimension::Faces) if cap + 2 <= budget.max_faces => {
                cap += 2;
                continue;
            }
            Round::Exhausted(dim) => return Ok(PathResult { outcome: PathOutcome::Exhausted(dim), states_visited: visited }),
        };
        let (sites, end) = replay_route(&bfs, a, &route)?;
        if canonical_code(&end).map_err(topo)? != target {
            return Err(SearchError::Internal("replayed path does not reach the target".into()));
        }
        return Ok(PathResult { outcome: PathOutcome::Found(sites), states_visited: visited });
    }
}

/// Writes a flip sequence, one `kind anchor` line per flip.
pub fn write_sequence(sites: &[FlipSite]) -> String {
    sites.iter().map(|s| format!("{} {}\n", s.kind, s.anchor)).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("step {step}: {source}")]
    Replay { step: usize, source: FlipError },
}

/// Reads `kind anchor` lines; blank lines and `#` comments are skipped.
pub fn parse_sequence(text: &str) -> Result<Vec<(FlipKind, Dart)>, SequenceError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| SequenceError::Parse { line: i + 1, msg };
        let mut parts = line.split_whitespace();
        let kind: FlipKind = parts.next().unwrap().parse().map_err(err)?;
        let anchor = parts
            .next()
            .ok_or_else(|| err("missing anchor dart".into()))?
            .parse::<Dart>()
            .map_err(|e| err(format!("bad anchor: {e}")))?;
        if parts.next().is_some() {
            return Err(err("trailing fields".into()));
        }
        out.push((kind, anchor));
    }
    Ok(out)
}

/// Applies a parsed sequence, returning every intermediate complex
/// (the input first).
pub fn replay_sequence(q: &QuadGMap, steps: &[(FlipKind, Dart)]) -> Result<Vec<QuadGMap>, SequenceError> {
    let mut out = vec![q.clone()];
    for (step, &(kind, anchor)) in steps.iter().enumerate() {
        let cur = out.last().unwrap();
        let next = site_at(cur, kind, anchor)
            .and_then(|s| apply_flip_unmarked(cur, &s))
            .map_err(|source| SequenceError::Replay { step: step + 1, source })?;
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flips::flip_sites;
    use crate::models::*;

    fn replay_reaches(a: &QuadGMap, b: &QuadGMap, sites: &[FlipSite]) -> bool {
        let steps: Vec<_> = sites.iter().map(|s| (s.kind, s.anchor)).collect();
        let seq = replay_sequence(a, &steps).unwrap();
        canonical_code(seq.last().unwrap()).unwrap() == canonical_code(b).unwrap()
    }

    #[test]
    fn identity_path_is_empty() {
        let q = cube_sphere();
        let perm: Vec<Dart> = (0..48).map(|d| (d * 7 + 5) % 48).collect();
        let r = flip_path(&q, &q.relabel(&perm), &Budget::new(6, 10)).unwrap();
        assert_eq!(r.sites(), Some(&[][..]));
    }

    #[test]
    fn single_expansion_from_beak() {
        let a = beak_sphere();
        let site = flip_sites(&a, FlipKind::B1Expand).remove(0);
        let b = apply_flip_unmarked(&a, &site).unwrap();
        assert_eq!(b.n_faces(), 5);
        let r = flip_path(&a, &b, &Budget::new(5, 1000)).unwrap();
        let sites = r.sites().unwrap();
        assert_eq!(sites.len(), 1);
        assert!(replay_reaches(&a, &b, sites));
    }

    #[test]
    fn pillow_to_cube() {
        let (a, b) = (pillow_sphere(), cube_sphere());
        let r = flip_path(&a, &b, &Budget::new(14, 1_000_000)).unwrap();
        let sites = r.sites().expect("connected");
        assert!(!sites.is_empty());
        assert!(replay_reaches(&a, &b, sites));
        // the sequence file round-trips
        let text = write_sequence(sites);
        assert!(replay_sequence(&a, &parse_sequence(&text).unwrap()).is_ok());
    }

    #[test]
    fn parity_is_an_obstruction() {
        // cube (F=6) and beak (F=1) differ in j2: nothing connects them
        let r = flip_path(&beak_sphere(), &cube_sphere(), &Budget::new(8, 100_000)).unwrap();
        assert_eq!(r.outcome, PathOutcome::Exhausted(BudgetDimension::Faces));
    }

    #[test]
    fn refuses_mismatched_surfaces() {
        assert!(matches!(
            flip_path(&cube_sphere(), &grid_torus(1, 1), &Budget::new(8, 10)),
            Err(SearchError::SurfaceMismatch(..))
        ));
    }

    #[test]
    fn state_cap_is_reported() {
        let r = flip_path(&beak_sphere(), &cube_sphere(), &Budget::new(14, 5)).unwrap();
        assert_eq!(r.outcome, PathOutcome::Exhausted(BudgetDimension::States));
    }

    #[test]
    fn sequence_parsing() {
        assert_eq!(parse_sequence("b1 3\n# note\n\nb2c 10\n").unwrap(), vec![(FlipKind::B1Expand, 3), (FlipKind::B2Collapse, 10)]);
        assert!(parse_sequence("b9 1").is_err());
        assert!(parse_sequence("b1").is_err());
        assert!(parse_sequence("b1 2 3").is_err());
    }
}
