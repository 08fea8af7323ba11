//! Census of the flip graph on small cubications.
//!
//! Classes are enumerated up to a face cap and joined along every collapse,
//! b3 and b31 flip; expansions need no separate pass because each one is
//! the inverse of a collapse from the larger class. Components that share
//! invariants but are still apart are then joined by path searches, which
//! may leave the cap. Components are only ever merged across equal
//! invariants; anything else trips the watchdog.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use crate::canon::{canonical_code, CanonicalCode};
use crate::flips::{stabilize_complex, DiagonalKind, DualPath, FlipKind, FlipSite};
use crate::flips::{diagonal_rotation, diagonal_sites, diagonal_slide};
use crate::gmap::QuadGMap;
use crate::homology::j1_is_zero;
use crate::models::grid_torus;
use crate::surface::{boundary_signature, BoundarySignature, SurfaceClass};

use super::enumerate::enumerate_cubications;
use super::path::{flip_path, neighbours, Budget, BudgetDimension, PathOutcome, SearchError};

/// The part of the invariant that an unmarked complex determines.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassInvariant {
    pub j2: bool,
    pub j1_zero: bool,
    pub boundary: BoundarySignature,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRecord {
    pub faces: usize,
    pub code: CanonicalCode,
    pub invariant: ClassInvariant,
    pub component: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentRecord {
    pub size: usize,
    /// Index of the smallest class, which is the one used in searches.
    pub representative: usize,
    pub invariant: ClassInvariant,
}

/// A pair of components with equal invariants that no path joined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unresolved {
    pub first: usize,
    pub second: usize,
    pub reason: BudgetDimension,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusReport {
    pub surface: SurfaceClass,
    pub boundary: Option<BoundarySignature>,
    pub max_faces: usize,
    pub budget: Budget,
    pub classes: Vec<ClassRecord>,
    pub components: Vec<ComponentRecord>,
    pub unresolved: Vec<Unresolved>,
    pub paths_searched: usize,
    pub states_visited: usize,
}

impl CensusReport {
    /// Components grouped by invariant.
    pub fn table(&self) -> BTreeMap<ClassInvariant, Vec<usize>> {
        let mut out: BTreeMap<ClassInvariant, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.components.iter().enumerate() {
            out.entry(c.invariant.clone()).or_default().push(i);
        }
        out
    }

    /// Whether every invariant class present is a single component.
    pub fn components_match_invariants(&self) -> bool {
        self.unresolved.is_empty() && self.table().values().all(|v| v.len() == 1)
    }

    pub fn component_of(&self, q: &QuadGMap) -> Option<usize> {
        let code = canonical_code(q).ok()?;
        self.classes.iter().find(|c| c.code == code).map(|c| c.component)
    }

    /// Line-oriented `key=value` rendering.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let sig = self.boundary.as_ref().map_or("-".to_string(), |b| b.to_string());
        writeln!(s, "surface={} boundary={} max_faces={}", self.surface.name(), sig, self.max_faces).unwrap();
        writeln!(s, "budget max_faces={} max_states={}", self.budget.max_faces, self.budget.max_states).unwrap();
        writeln!(s, "classes={} components={}", self.classes.len(), self.components.len()).unwrap();
        for (inv, comps) in self.table() {
            let sizes: Vec<String> = comps.iter().map(|&c| self.components[c].size.to_string()).collect();
            writeln!(
                s,
                "invariant j2={} j1_zero={} boundary={} components={} sizes={}",
                u8::from(inv.j2),
                inv.j1_zero,
                inv.boundary,
                comps.len(),
                sizes.join(",")
            )
            .unwrap();
        }
        for (i, c) in self.components.iter().enumerate() {
            let rep = &self.classes[c.representative];
            writeln!(s, "component {} size={} smallest_faces={} smallest_code={}", i, c.size, rep.faces, rep.code).unwrap();
        }
        for u in &self.unresolved {
            writeln!(s, "unresolved {} {} exhausted={}", u.first, u.second, u.reason).unwrap();
        }
        writeln!(s, "paths_searched={} states_visited={}", self.paths_searched, self.states_visited).unwrap();
        s
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Keeps the smaller root, so roots are the smallest class of their set.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Runs the census of `surface` up to `max_faces` squares.
pub fn census(
    surface: &SurfaceClass,
    max_faces: usize,
    boundary: Option<&BoundarySignature>,
    budget: &Budget,
) -> Result<CensusReport, SearchError> {
    let complexes = enumerate_cubications(surface, max_faces, boundary);
    let mut index = HashMap::with_capacity(complexes.len());
    let mut classes = Vec::with_capacity(complexes.len());
    for (i, q) in complexes.iter().enumerate() {
        let code = canonical_code(q).map_err(|e| SearchError::Internal(e.to_string()))?;
        index.insert(code.clone(), i);
        let invariant = ClassInvariant {
            j2: q.n_faces() % 2 == 1,
            j1_zero: j1_is_zero(q),
            boundary: boundary_signature(q),
        };
        classes.push(ClassRecord { faces: q.n_faces(), code, invariant, component: 0 });
    }

    let mut uf = UnionFind((0..complexes.len()).collect());
    let joining = [FlipKind::B1Collapse, FlipKind::B2Collapse, FlipKind::B3, FlipKind::B31];
    for (i, q) in complexes.iter().enumerate() {
        let inv = &classes[i].invariant;
        for (kind, anchor, r) in neighbours(q, &joining, max_faces, surface, &inv.boundary)? {
            let code = canonical_code(&r).map_err(|e| SearchError::Internal(e.to_string()))?;
            let j = *index.get(&code).ok_or_else(|| {
                SearchError::Internal(format!("{kind} at {anchor} leaves the enumerated set"))
            })?;
            if classes[j].invariant != *inv {
                return Err(SearchError::Internal(format!("{kind} at {anchor} changed the invariant")));
            }
            uf.union(i, j);
        }
    }

    // join what the in-cap flips left apart, within each invariant class
    let mut paths_searched = 0;
    let mut states_visited = 0;
    let mut unresolved_roots = Vec::new();
    let mut by_invariant: BTreeMap<ClassInvariant, Vec<usize>> = BTreeMap::new();
    for (i, c) in classes.iter().enumerate() {
        if uf.find(i) == i {
            by_invariant.entry(c.invariant.clone()).or_default().push(i);
        }
    }
    for roots in by_invariant.values() {
        let first = roots[0];
        for &other in &roots[1..] {
            if uf.find(other) == uf.find(first) {
                continue;
            }
            let r = flip_path(&complexes[first], &complexes[other], budget)?;
            paths_searched += 1;
            states_visited += r.states_visited;
            match r.outcome {
                PathOutcome::Found(_) => uf.union(first, other),
                PathOutcome::Exhausted(dim) => unresolved_roots.push((first, other, dim)),
            }
        }
    }

    let mut comp_of_root = BTreeMap::new();
    let mut components: Vec<ComponentRecord> = Vec::new();
    for i in 0..complexes.len() {
        let root = uf.find(i);
        let c = *comp_of_root.entry(root).or_insert_with(|| {
            components.push(ComponentRecord { size: 0, representative: root, invariant: classes[root].invariant.clone() });
            components.len() - 1
        });
        if classes[i].invariant != components[c].invariant {
            return Err(SearchError::Internal("a component mixes invariants".into()));
        }
        components[c].size += 1;
        classes[i].component = c;
    }
    let unresolved = unresolved_roots
        .into_iter()
        .filter_map(|(a, b, reason)| {
            let (ca, cb) = (classes[a].component, classes[b].component);
            (ca != cb).then_some(Unresolved { first: ca, second: cb, reason })
        })
        .collect();

    Ok(CensusReport {
        surface: *surface,
        boundary: boundary.cloned(),
        max_faces,
        budget: budget.clone(),
        classes,
        components,
        unresolved,
        paths_searched,
        states_visited,
    })
}

/// A diagonal move on a model complex together with a flip sequence that
/// realizes it.
#[derive(Clone, Debug)]
pub struct DiagonalRealization {
    pub model: QuadGMap,
    pub moved: QuadGMap,
    pub sequence: Vec<FlipSite>,
    pub states_visited: usize,
}

/// The model used for each diagonal move: the 2x2 torus for slides, and for
/// rotations the 1x1 torus with one circle added, which has a vertex of
/// degree two.
pub fn diagonal_model(kind: DiagonalKind) -> QuadGMap {
    match kind {
        DiagonalKind::SlideForward | DiagonalKind::SlideBackward => grid_torus(2, 2),
        DiagonalKind::Rotation => stabilize_complex(&grid_torus(1, 1), &DualPath::trivial(0))
            .expect("the model stabilizes"),
    }
}

/// Finds flips realizing the first diagonal move of `kind` on its model,
/// with ten faces of headroom.
pub fn realize_diagonal_as_flips(kind: DiagonalKind, max_states: usize) -> Result<DiagonalRealization, SearchError> {
    let model = diagonal_model(kind);
    let site = diagonal_sites(&model, kind)
        .into_iter()
        .next()
        .ok_or_else(|| SearchError::Internal(format!("model has no {kind} site")))?;
    let moved = match kind {
        DiagonalKind::Rotation => diagonal_rotation(&model, &site)?,
        _ => diagonal_slide(&model, &site)?,
    };
    let budget = Budget::new(model.n_faces() + 10, max_states);
    let r = flip_path(&model, &moved, &budget)?;
    match r.outcome {
        PathOutcome::Found(sequence) => Ok(DiagonalRealization { model, moved, sequence, states_visited: r.states_visited }),
        PathOutcome::Exhausted(dim) => {
            Err(SearchError::Internal(format!("{kind} not realized within budget ({dim} exhausted)")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::replay_sequence;

    #[test]
    fn small_sphere_census() {
        let r = census(&SurfaceClass::sphere(), 4, None, &Budget::new(12, 100_000)).unwrap();
        assert_eq!(r.classes.len(), 41);
        assert_eq!(r.components.len(), 2);
        assert!(r.components_match_invariants());
        let parity: Vec<bool> = r.components.iter().map(|c| c.invariant.j2).collect();
        assert_eq!(parity, vec![true, false]);
    }

    #[test]
    fn census_is_deterministic() {
        let run = || census(&SurfaceClass::torus(), 3, None, &Budget::new(9, 100_000)).unwrap().render();
        assert_eq!(run(), run());
    }

    #[test]
    fn witnesses_have_their_components() {
        let r = census(&SurfaceClass::torus(), 4, None, &Budget::new(10, 200_000)).unwrap();
        let a = r.component_of(&grid_torus(1, 1)).unwrap();
        let b = r.component_of(&grid_torus(1, 2)).unwrap();
        let c = r.component_of(&grid_torus(2, 2)).unwrap();
        assert!(a != b && b != c && a != c);
    }

    #[test]
    fn diagonal_slide_realized() {
        let d = realize_diagonal_as_flips(DiagonalKind::SlideForward, 1_000_000).unwrap();
        let steps: Vec<_> = d.sequence.iter().map(|s| (s.kind, s.anchor)).collect();
        let end = replay_sequence(&d.model, &steps).unwrap().pop().unwrap();
        assert!(crate::canon::is_isomorphic(&end, &d.moved).unwrap());
    }
}
