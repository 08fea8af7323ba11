//! Two-dimensional generalized maps.
//!
//! A dart is a (vertex, edge, face) flag. `a0` swaps the vertex inside an
//! edge-side, `a1` swaps the edge inside a face corner, `a2` swaps the face
//! across an edge. A dart with `a2(d) == d` lies on the surface boundary.

use std::fmt;

use thiserror::Error;

pub type Dart = u32;

/// Three dart involutions with no further guarantees beyond matching lengths
/// and in-range targets. [`QuadGMap`] adds the cubication invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GMap {
    links: Vec<[Dart; 3]>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GMapError {
    #[error("involution arrays have different lengths")]
    LengthMismatch,
    #[error("a{index}({dart}) = {target} is out of range")]
    OutOfRange { index: usize, dart: Dart, target: Dart },
}

/// Orbit labelling of the darts under a subgroup generated by some of the
/// involutions. Orbit ids are assigned in order of their smallest dart.
#[derive(Clone, Debug)]
pub struct Orbits {
    pub id: Vec<u32>,
    pub count: usize,
}

impl Orbits {
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &o in &self.id {
            sizes[o as usize] += 1;
        }
        sizes
    }

    /// One representative (the smallest dart) per orbit.
    pub fn representatives(&self) -> Vec<Dart> {
        let mut reps = vec![Dart::MAX; self.count];
        for (d, &o) in self.id.iter().enumerate() {
            if reps[o as usize] == Dart::MAX {
                reps[o as usize] = d as Dart;
            }
        }
        reps
    }
}

/// Vertex, edge and face orbits computed together.
#[derive(Clone, Debug)]
pub struct Cells {
    pub vertices: Orbits,
    pub edges: Orbits,
    pub faces: Orbits,
}

impl GMap {
    pub fn new(a0: Vec<Dart>, a1: Vec<Dart>, a2: Vec<Dart>) -> Result<Self, GMapError> {
        if a0.len() != a1.len() || a1.len() != a2.len() {
            return Err(GMapError::LengthMismatch);
        }
        let n = a0.len();
        let mut links = Vec::with_capacity(n);
        for d in 0..n {
            let l = [a0[d], a1[d], a2[d]];
            for (index, &target) in l.iter().enumerate() {
                if target as usize >= n {
                    return Err(GMapError::OutOfRange { index, dart: d as Dart, target });
                }
            }
            links.push(l);
        }
        Ok(Self { links })
    }

    pub(crate) fn from_links(links: Vec<[Dart; 3]>) -> Self {
        Self { links }
    }

    pub fn empty() -> Self {
        Self { links: Vec::new() }
    }

    pub fn n_darts(&self) -> usize {
        self.links.len()
    }

    #[inline]
    pub fn alpha(&self, i: usize, d: Dart) -> Dart {
        self.links[d as usize][i]
    }

    #[inline]
    pub fn links(&self) -> &[[Dart; 3]] {
        &self.links
    }

    pub fn involution(&self, i: usize) -> Vec<Dart> {
        self.links.iter().map(|l| l[i]).collect()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> {
        0..self.links.len() as Dart
    }

    pub fn is_boundary_dart(&self, d: Dart) -> bool {
        self.alpha(2, d) == d
    }

    /// Orbits of the subgroup generated by the listed involutions.
    pub fn orbits(&self, gens: &[usize]) -> Orbits {
        let n = self.n_darts();
        let mut id = vec![u32::MAX; n];
        let mut count = 0u32;
        let mut stack = Vec::new();
        for start in 0..n {
            if id[start] != u32::MAX {
                continue;
            }
            id[start] = count;
            stack.push(start as Dart);
            while let Some(d) = stack.pop() {
                for &i in gens {
                    let e = self.alpha(i, d);
                    if id[e as usize] == u32::MAX {
                        id[e as usize] = count;
                        stack.push(e);
                    }
                }
            }
            count += 1;
        }
        Orbits { id, count: count as usize }
    }

    /// The orbit of `d`, in discovery order.
    pub fn orbit(&self, d: Dart, gens: &[usize]) -> Vec<Dart> {
        let mut seen = vec![d];
        let mut k = 0;
        while k < seen.len() {
            let x = seen[k];
            for &i in gens {
                let y = self.alpha(i, x);
                if !seen.contains(&y) {
                    seen.push(y);
                }
            }
            k += 1;
        }
        seen
    }

    pub fn cells(&self) -> Cells {
        Cells {
            vertices: self.orbits(&[1, 2]),
            edges: self.orbits(&[0, 2]),
            faces: self.orbits(&[0, 1]),
        }
    }

    pub fn components(&self) -> Orbits {
        self.orbits(&[0, 1, 2])
    }

    pub fn is_connected(&self) -> bool {
        self.n_darts() > 0 && self.components().count == 1
    }

    /// Renames dart `d` to `perm[d]`.
    pub fn relabel(&self, perm: &[Dart]) -> GMap {
        assert_eq!(perm.len(), self.n_darts(), "permutation length");
        let mut links = vec![[0; 3]; self.n_darts()];
        for (d, l) in self.links.iter().enumerate() {
            let nd = perm[d] as usize;
            links[nd] = [perm[l[0] as usize], perm[l[1] as usize], perm[l[2] as usize]];
        }
        GMap { links }
    }

    /// Exchanges `a0` and `a2`: the Poincaré dual map.
    pub fn dual(&self) -> GMap {
        GMap { links: self.links.iter().map(|l| [l[2], l[1], l[0]]).collect() }
    }

    /// Checks the structural generalized-map axioms shared by quad complexes
    /// and curve arrangements: involutions, fixed-point-free `a1`, and `a0 a2`
    /// an involution.
    pub(crate) fn check_axioms(&self, report: &mut ValidationReport) {
        for d in self.darts() {
            for i in 0..3 {
                let e = self.alpha(i, d);
                if self.alpha(i, e) != d {
                    report.push(Violation::NotInvolution { index: i, dart: d });
                }
            }
            if self.alpha(1, d) == d {
                report.push(Violation::FixedPoint { index: 1, dart: d });
            }
            let x = self.alpha(0, self.alpha(2, d));
            let y = self.alpha(2, self.alpha(0, d));
            if x != y {
                report.push(Violation::NotCommuting { dart: d });
            }
        }
    }
}

/// One failed invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotInvolution { index: usize, dart: Dart },
    FixedPoint { index: usize, dart: Dart },
    NotCommuting { dart: Dart },
    FoldedEdge { dart: Dart },
    NonQuadFace { dart: Dart, size: usize },
    Empty,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotInvolution { index, dart } => {
                write!(f, "a{index} not an involution at dart {dart}")
            }
            Violation::FixedPoint { index, dart } => {
                write!(f, "a{index} not fixed-point-free (dart {dart})")
            }
            Violation::NotCommuting { dart } => {
                write!(f, "a0a2 not an involution at dart {dart}")
            }
            Violation::FoldedEdge { dart } => write!(f, "edge folded onto itself at dart {dart}"),
            Violation::NonQuadFace { dart, size } => {
                write!(f, "non-quad face at dart {dart} ({size} darts)")
            }
            Violation::Empty => write!(f, "no darts"),
        }
    }
}

/// Result of [`QuadGMap::validate`]: empty means the complex is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, v: Violation) {
        // one report line per kind of failure is plenty for large inputs
        if self.violations.len() < 64 {
            self.violations.push(v);
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

/// A cubication of a compact surface: a generalized map all of whose faces
/// are squares. Immutable once constructed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadGMap {
    map: GMap,
}

impl QuadGMap {
    pub fn validate(map: &GMap) -> ValidationReport {
        let mut report = ValidationReport::default();
        if map.n_darts() == 0 {
            report.push(Violation::Empty);
            return report;
        }
        map.check_axioms(&mut report);
        for d in map.darts() {
            let a0 = map.alpha(0, d);
            if a0 == d {
                report.push(Violation::FixedPoint { index: 0, dart: d });
            } else if map.alpha(2, d) == a0 {
                report.push(Violation::FoldedEdge { dart: d });
            }
        }
        if !report.is_ok() {
            // orbit sizes are meaningless when the involutions are broken
            return report;
        }
        let faces = map.orbits(&[0, 1]);
        let sizes = faces.sizes();
        for (rep, size) in faces.representatives().into_iter().zip(sizes) {
            if size != 8 {
                report.push(Violation::NonQuadFace { dart: rep, size });
            }
        }
        report
    }

    pub fn new(map: GMap) -> Result<Self, ValidationReport> {
        let report = Self::validate(&map);
        if report.is_ok() {
            Ok(Self { map })
        } else {
            Err(report)
        }
    }

    pub fn from_involutions(
        a0: Vec<Dart>,
        a1: Vec<Dart>,
        a2: Vec<Dart>,
    ) -> Result<Self, ValidationReport> {
        let map = GMap::new(a0, a1, a2).map_err(|_| ValidationReport {
            violations: vec![Violation::Empty],
        })?;
        Self::new(map)
    }

    /// For callers that built the map from already-valid pieces.
    pub(crate) fn new_unchecked(map: GMap) -> Self {
        debug_assert!(Self::validate(&map).is_ok(), "{}", Self::validate(&map));
        Self { map }
    }

    pub fn gmap(&self) -> &GMap {
        &self.map
    }

    pub fn into_gmap(self) -> GMap {
        self.map
    }

    pub fn n_darts(&self) -> usize {
        self.map.n_darts()
    }

    #[inline]
    pub fn alpha(&self, i: usize, d: Dart) -> Dart {
        self.map.alpha(i, d)
    }

    pub fn n_faces(&self) -> usize {
        self.map.n_darts() / 8
    }

    /// (V, E, F).
    pub fn cell_counts(&self) -> (usize, usize, usize) {
        let c = self.map.cells();
        (c.vertices.count, c.edges.count, c.faces.count)
    }

    pub fn euler_characteristic(&self) -> i64 {
        let (v, e, f) = self.cell_counts();
        v as i64 - e as i64 + f as i64
    }

    pub fn relabel(&self, perm: &[Dart]) -> QuadGMap {
        QuadGMap { map: self.map.relabel(perm) }
    }

    pub fn is_connected(&self) -> bool {
        self.map.is_connected()
    }

    pub fn has_boundary(&self) -> bool {
        self.map.darts().any(|d| self.map.is_boundary_dart(d))
    }
}

/// Builds quad complexes face by face in the standard dart layout: face `f`
/// owns darts `8f..8f+8`, side `s` is the pair `(8f+2s, 8f+2s+1)` running
/// from corner `s` to corner `s+1`.
#[derive(Clone, Debug)]
pub struct QuadBuilder {
    a2: Vec<Dart>,
}

impl QuadBuilder {
    pub fn new(n_faces: usize) -> Self {
        Self { a2: (0..(8 * n_faces) as Dart).collect() }
    }

    pub fn n_faces(&self) -> usize {
        self.a2.len() / 8
    }

    pub fn add_face(&mut self) -> usize {
        let f = self.n_faces();
        let base = self.a2.len() as Dart;
        self.a2.extend(base..base + 8);
        f
    }

    /// Dart on side `s` of face `f` sitting at the side's start corner.
    pub fn side_start(f: usize, s: usize) -> Dart {
        (8 * f + 2 * (s % 4)) as Dart
    }

    pub fn side_end(f: usize, s: usize) -> Dart {
        (8 * f + 2 * (s % 4) + 1) as Dart
    }

    /// Glues side `s` of face `f` to side `t` of face `g`. With `reversed`
    /// the start corner of one meets the end corner of the other, which is
    /// the orientation-compatible gluing.
    pub fn glue(&mut self, f: usize, s: usize, g: usize, t: usize, reversed: bool) -> &mut Self {
        let (fs, fe) = (Self::side_start(f, s), Self::side_end(f, s));
        let (gs, ge) = (Self::side_start(g, t), Self::side_end(g, t));
        let (x, y) = if reversed { (ge, gs) } else { (gs, ge) };
        assert!(
            self.a2[fs as usize] == fs && self.a2[x as usize] == x,
            "side glued twice"
        );
        self.a2[fs as usize] = x;
        self.a2[x as usize] = fs;
        self.a2[fe as usize] = y;
        self.a2[y as usize] = fe;
        self
    }

    pub fn is_free(&self, f: usize, s: usize) -> bool {
        let d = Self::side_start(f, s);
        self.a2[d as usize] == d
    }

    pub fn a2(&self) -> &[Dart] {
        &self.a2
    }

    pub fn into_gmap(&self) -> GMap {
        let n = self.a2.len();
        let links = (0..n)
            .map(|d| [standard_a0(d as Dart), standard_a1(d as Dart), self.a2[d]])
            .collect();
        GMap::from_links(links)
    }

    pub fn build(&self) -> Result<QuadGMap, ValidationReport> {
        QuadGMap::new(self.into_gmap())
    }
}

#[inline]
pub(crate) fn standard_a0(d: Dart) -> Dart {
    d ^ 1
}

#[inline]
pub(crate) fn standard_a1(d: Dart) -> Dart {
    let base = d & !7;
    let j = d & 7;
    if j % 2 == 1 {
        base + (j + 1) % 8
    } else {
        base + (j + 7) % 8
    }
}

/// Builds a complex from quads given by vertex labels; sides with the same
/// unordered vertex pair are glued (at most two per pair), the rest are
/// boundary. Only suitable for complexes without multi-edges.
pub fn from_vertex_quads(quads: &[[usize; 4]]) -> Result<QuadGMap, ValidationReport> {
    use std::collections::BTreeMap;
    let mut b = QuadBuilder::new(quads.len());
    let mut sides: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for (f, q) in quads.iter().enumerate() {
        for s in 0..4 {
            let (u, v) = (q[s], q[(s + 1) % 4]);
            sides.entry((u.min(v), u.max(v))).or_default().push((f, s));
        }
    }
    for list in sides.values() {
        if let [(f, s), (g, t)] = list[..] {
            let reversed = quads[f][s] == quads[g][(t + 1) % 4];
            b.glue(f, s, g, t, reversed);
        } else {
            assert!(list.len() == 1, "vertex pair shared by more than two sides");
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_square() -> QuadGMap {
        QuadBuilder::new(1).build().unwrap()
    }

    #[test]
    fn standard_layout_is_a_square() {
        let q = single_square();
        assert_eq!(q.cell_counts(), (4, 4, 1));
        for d in 0..8 {
            assert_eq!(standard_a1(standard_a1(d)), d);
            assert_ne!(standard_a1(d), d);
        }
    }

    #[test]
    fn a0_fixed_point_reported() {
        let mut a0: Vec<Dart> = (0..8).map(standard_a0).collect();
        a0[0] = 0;
        a0[1] = 1;
        let a1: Vec<Dart> = (0..8).map(standard_a1).collect();
        let a2: Vec<Dart> = (0..8).collect();
        let err = QuadGMap::from_involutions(a0, a1, a2).unwrap_err();
        assert!(err.to_string().contains("a0 not fixed-point-free"));
    }

    #[test]
    fn hexagon_face_reported() {
        // a single hexagon: 12 darts
        let n = 12u32;
        let a0: Vec<Dart> = (0..n).map(|d| d ^ 1).collect();
        let a1: Vec<Dart> = (0..n)
            .map(|d| if d % 2 == 1 { (d + 1) % n } else { (d + n - 1) % n })
            .collect();
        let a2: Vec<Dart> = (0..n).collect();
        let err = QuadGMap::from_involutions(a0, a1, a2).unwrap_err();
        assert!(err.to_string().contains("non-quad face"), "{err}");
    }

    #[test]
    fn size_six_face_reported() {
        let n = 6u32;
        let a0: Vec<Dart> = (0..n).map(|d| d ^ 1).collect();
        let a1: Vec<Dart> = (0..n)
            .map(|d| if d % 2 == 1 { (d + 1) % n } else { (d + n - 1) % n })
            .collect();
        let a2: Vec<Dart> = (0..n).collect();
        let err = QuadGMap::from_involutions(a0, a1, a2).unwrap_err();
        assert_eq!(
            err.violations,
            vec![Violation::NonQuadFace { dart: 0, size: 6 }]
        );
    }

    #[test]
    fn folded_edge_rejected() {
        let mut b = QuadBuilder::new(1);
        b.glue(0, 0, 0, 0, true);
        let err = b.build().unwrap_err();
        assert!(matches!(err.violations[0], Violation::FoldedEdge { .. }));
    }

    #[test]
    fn noncommuting_a2_rejected() {
        let mut a2: Vec<Dart> = (0..16).collect();
        // glue dart 0 to 8 but leave a0-partners unglued
        a2[0] = 8;
        a2[8] = 0;
        let map = GMap::new(
            (0..16).map(standard_a0).collect(),
            (0..16).map(standard_a1).collect(),
            a2,
        )
        .unwrap();
        let report = QuadGMap::validate(&map);
        assert!(report.violations.iter().any(|v| matches!(v, Violation::NotCommuting { .. })));
    }

    #[test]
    fn relabel_preserves_counts() {
        let mut b = QuadBuilder::new(2);
        b.glue(0, 1, 1, 3, true);
        let q = b.build().unwrap();
        let perm: Vec<Dart> = (0..16).rev().collect();
        let r = q.relabel(&perm);
        assert!(QuadGMap::validate(r.gmap()).is_ok());
        assert_eq!(r.cell_counts(), q.cell_counts());
    }
}
