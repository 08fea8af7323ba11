//! The curve system drawn by joining opposite side midpoints in every square,
//! and its cell structure on the surface.
//!
//! The arrangement of the section arcs is the dual map of the cubication:
//! double points are face centres, arcs cross edges, complementary regions
//! are vertex stars. In dart terms it is the same dart set with `a0` and `a2`
//! exchanged; a fixed point of the arrangement's `a0` is an arc ending on the
//! surface boundary.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::gmap::{Dart, GMap, QuadGMap, ValidationReport};
use crate::surface::{classify_map, classify_surface, SurfaceClass, TopologyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Circle,
    Interval,
}

/// One traversal of a square by a section arc. `axis` tells which of the two
/// arcs of the square is used: axis 0 joins the side containing the square's
/// smallest dart to its opposite side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceStep {
    pub face: usize,
    pub axis: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveComponent {
    pub kind: CurveKind,
    pub steps: Vec<FaceStep>,
}

impl CurveComponent {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct CurveSystem {
    pub components: Vec<CurveComponent>,
    pub double_point_count: usize,
    pub arrangement: Arrangement,
}

impl CurveSystem {
    pub fn circles(&self) -> usize {
        self.components.iter().filter(|c| c.kind == CurveKind::Circle).count()
    }

    pub fn intervals(&self) -> usize {
        self.components.iter().filter(|c| c.kind == CurveKind::Interval).count()
    }

    /// Text report: one line per component, then the double point count.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for c in &self.components {
            let kind = match c.kind {
                CurveKind::Circle => "circle",
                CurveKind::Interval => "interval",
            };
            writeln!(out, "{kind} len={}", c.len()).unwrap();
        }
        writeln!(out, "double_points={}", self.double_point_count).unwrap();
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("malformed arrangement:\n{0}")]
    Malformed(ValidationReport),
    #[error("arrangement cells do not match the surface (complementary regions are not all disks)")]
    NonCellular,
    #[error("arrangement is not admissible: its image is not connected")]
    NotAdmissible,
    #[error("dual of an arrangement with boundary endpoints is not supported")]
    HasBoundary,
    #[error("arrangement vertex of valence {0} cannot dualise to a square")]
    NotQuadrilateral(usize),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("dual complex is invalid:\n{0}")]
    InvalidDual(ValidationReport),
}

/// A cellular curve arrangement on a surface, as a generalized map whose
/// vertices are curve points (4-valent double points, or 2-valent marks on
/// otherwise crossing-free circles), whose edges are arcs and whose faces are
/// the complementary regions.
#[derive(Clone, Debug)]
pub struct Arrangement {
    map: GMap,
    surface: SurfaceClass,
}

impl Arrangement {
    /// Accepts well-formed maps. A connected map must have the Euler
    /// characteristic of `surface`, which is what makes every complementary
    /// region a disk; disconnected or empty maps are accepted but are never
    /// admissible.
    pub fn new(map: GMap, surface: SurfaceClass) -> Result<Self, CurveError> {
        let mut report = ValidationReport::default();
        map.check_axioms(&mut report);
        if !report.is_ok() {
            return Err(CurveError::Malformed(report));
        }
        let has_ends = map.darts().any(|d| map.alpha(0, d) == d);
        if map.is_connected() {
            if map.darts().any(|d| map.alpha(2, d) == d) {
                return Err(CurveError::NonCellular);
            }
            let c = map.cells();
            let euler = c.vertices.count as i64 - c.edges.count as i64 + c.faces.count as i64;
            if euler != surface.euler || has_ends != !surface.is_closed() {
                return Err(CurveError::NonCellular);
            }
        }
        Ok(Self { map, surface })
    }

    /// The empty arrangement on a surface.
    pub fn empty(surface: SurfaceClass) -> Self {
        Self { map: GMap::empty(), surface }
    }

    pub fn map(&self) -> &GMap {
        &self.map
    }

    pub fn surface(&self) -> SurfaceClass {
        self.surface
    }

    /// Number of arc ends lying on the surface boundary.
    pub fn boundary_endpoints(&self) -> usize {
        self.map.darts().filter(|&d| self.map.alpha(0, d) == d).count() / 2
    }

    /// Valence of every arrangement vertex.
    pub fn vertex_valences(&self) -> Vec<usize> {
        self.map.orbits(&[1, 2]).sizes().into_iter().map(|s| s / 2).collect()
    }

    pub fn to_dot(&self) -> String {
        arrangement_dot(self)
    }
}

/// Counts the 4-valent vertices of an arrangement.
pub fn double_points(a: &Arrangement) -> usize {
    a.vertex_valences().into_iter().filter(|&v| v == 4).count()
}

/// Connected image; complementary regions are disks by construction.
pub fn is_admissible(a: &Arrangement) -> bool {
    if !a.map.is_connected() {
        return false;
    }
    debug_assert!(
        classify_map(&a.map).is_ok(),
        "connected arrangement passed the cellularity check"
    );
    true
}

/// The square of `d` opposite to the side of `d`.
#[inline]
pub(crate) fn opposite_side(g: &GMap, d: Dart) -> Dart {
    g.alpha(1, g.alpha(0, g.alpha(1, d)))
}

pub fn extract_curves(q: &QuadGMap) -> Result<CurveSystem, CurveError> {
    let surface = classify_surface(q)?;
    let g = q.gmap();
    let n = g.n_darts();
    let faces = g.orbits(&[0, 1]);
    // axis of every dart: 0 on the pair of sides through the face's smallest
    // dart, 1 on the other pair
    let reps = faces.representatives();
    let mut axis = vec![1u8; n];
    for &r in &reps {
        for d in [r, g.alpha(0, r), opposite_side(g, r), g.alpha(0, opposite_side(g, r))] {
            axis[d as usize] = 0;
        }
    }
    let side = |d: Dart| d.min(g.alpha(0, d));
    let mut visited = vec![false; n];
    let mut components = Vec::new();

    let walk = |start: Dart, visited: &mut Vec<bool>| -> CurveComponent {
        let mut steps = Vec::new();
        let mut cur = start;
        loop {
            visited[side(cur) as usize] = true;
            steps.push(FaceStep { face: faces.id[cur as usize] as usize, axis: axis[cur as usize] });
            let exit = opposite_side(g, cur);
            visited[side(exit) as usize] = true;
            let next = g.alpha(2, exit);
            if next == exit {
                return CurveComponent { kind: CurveKind::Interval, steps };
            }
            if side(next) == side(start) {
                return CurveComponent { kind: CurveKind::Circle, steps };
            }
            cur = next;
        }
    };

    for d in g.darts() {
        if g.is_boundary_dart(d) && !visited[side(d) as usize] {
            components.push(walk(side(d), &mut visited));
        }
    }
    for d in g.darts() {
        if !visited[side(d) as usize] {
            components.push(walk(side(d), &mut visited));
        }
    }

    let arrangement = Arrangement::new(g.dual(), surface)
        .expect("the dual of a cubication is a cellular arrangement");
    Ok(CurveSystem { components, double_point_count: q.n_faces(), arrangement })
}

/// Cubication dual to an admissible arrangement on a closed surface.
pub fn dual_cubication(a: &Arrangement) -> Result<QuadGMap, CurveError> {
    if !is_admissible(a) {
        return Err(CurveError::NotAdmissible);
    }
    if a.boundary_endpoints() > 0 {
        return Err(CurveError::HasBoundary);
    }
    if let Some(&v) = a.vertex_valences().iter().find(|&&v| v != 4) {
        return Err(CurveError::NotQuadrilateral(v));
    }
    let q = QuadGMap::new(a.map.dual()).map_err(CurveError::InvalidDual)?;
    let class = classify_surface(&q)?;
    debug_assert_eq!(class, a.surface);
    Ok(q)
}

fn arrangement_dot(a: &Arrangement) -> String {
    let g = &a.map;
    let cells = g.cells();
    let mut out = String::from("graph arrangement {\n");
    for (v, val) in a.vertex_valences().into_iter().enumerate() {
        writeln!(out, "  p{v} [label=\"p{v}\", shape={}];", if val == 4 { "circle" } else { "point" })
            .unwrap();
    }
    let mut ends = 0;
    for rep in cells.edges.representatives() {
        let u = cells.vertices.id[rep as usize];
        let x = g.alpha(0, rep);
        if x == rep {
            writeln!(out, "  b{ends} [shape=box, label=\"\"];").unwrap();
            writeln!(out, "  p{u} -- b{ends};").unwrap();
            ends += 1;
        } else {
            let w = cells.vertices.id[x as usize];
            writeln!(out, "  p{u} -- p{w};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of the 1-skeleton of a cubication; boundary edges dashed.
pub fn skeleton_dot(q: &QuadGMap) -> String {
    let g = q.gmap();
    let cells = g.cells();
    let mut out = String::from("graph skeleton {\n");
    for v in 0..cells.vertices.count {
        writeln!(out, "  v{v};").unwrap();
    }
    for rep in cells.edges.representatives() {
        let u = cells.vertices.id[rep as usize];
        let w = cells.vertices.id[g.alpha(0, rep) as usize];
        let style = if g.is_boundary_dart(rep) { " [style=dashed]" } else { "" };
        writeln!(out, "  v{u} -- v{w}{style};").unwrap();
    }
    out.push_str("}\n");
    out
}

impl fmt::Display for CurveSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_isomorphic;
    use crate::gmap::QuadBuilder;
    use crate::models::*;

    /// Independent tracer: follows section arcs square by square on the
    /// standard face layout, using only `a2` and side arithmetic.
    fn brute_trace(q: &QuadGMap) -> Vec<(bool, usize)> {
        let g = q.gmap();
        let n_sides = g.n_darts() / 2;
        let mut seen = vec![false; n_sides];
        let mut out = Vec::new();
        let glue = |side: usize| -> Option<usize> {
            let d = (2 * side) as Dart;
            let e = g.alpha(2, d);
            (e != d).then_some(e as usize / 2)
        };
        let opp = |side: usize| (side / 4) * 4 + (side % 4 + 2) % 4;
        let mut starts: Vec<usize> = (0..n_sides).filter(|&s| glue(s).is_none()).collect();
        starts.extend(0..n_sides);
        for s0 in starts {
            if seen[s0] {
                continue;
            }
            let mut cur = s0;
            let mut len = 0;
            let closed = loop {
                seen[cur] = true;
                len += 1;
                let exit = opp(cur);
                seen[exit] = true;
                match glue(exit) {
                    None => break false,
                    Some(next) if next == s0 => break true,
                    Some(next) => cur = next,
                }
            };
            out.push((closed, len));
        }
        out.sort_unstable();
        out
    }

    fn summary(c: &CurveSystem) -> Vec<(bool, usize)> {
        let mut v: Vec<_> =
            c.components.iter().map(|c| (c.kind == CurveKind::Circle, c.len())).collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn cube_has_three_equators() {
        let c = extract_curves(&cube_sphere()).unwrap();
        assert_eq!(summary(&c), vec![(true, 4), (true, 4), (true, 4)]);
        assert_eq!(summary(&c), brute_trace(&cube_sphere()));
        assert_eq!(c.double_point_count, 6);
        assert_eq!(double_points(&c.arrangement), 6);
    }

    #[test]
    fn small_torus_and_disk() {
        let t = extract_curves(&grid_torus(1, 1)).unwrap();
        assert_eq!(summary(&t), vec![(true, 1), (true, 1)]);
        assert_eq!(t.double_point_count, 1);
        let d = extract_curves(&disk_grid(1, 1)).unwrap();
        assert_eq!(summary(&d), vec![(false, 1), (false, 1)]);
        assert_eq!(d.arrangement.boundary_endpoints(), 4);
    }

    #[test]
    fn pillow_double_points() {
        let c = extract_curves(&pillow_sphere()).unwrap();
        assert_eq!(double_points(&c.arrangement), 2);
    }

    #[test]
    fn every_face_traversed_once_per_axis() {
        for q in [cube_sphere(), grid_torus(2, 3), klein_grid(2, 2), moebius_strip(3), annulus_grid(2, 2)] {
            let c = extract_curves(&q).unwrap();
            let mut seen = vec![[0u8; 2]; q.n_faces()];
            for comp in &c.components {
                for s in &comp.steps {
                    seen[s.face][s.axis as usize] += 1;
                }
            }
            assert!(seen.iter().all(|s| *s == [1, 1]));
            assert_eq!(summary(&c), brute_trace(&q));
            let boundary_edges: usize = crate::surface::boundary_signature(&q).total_edges();
            assert_eq!(2 * c.intervals(), boundary_edges);
        }
    }

    #[test]
    fn report_format() {
        let c = extract_curves(&disk_grid(1, 1)).unwrap();
        assert_eq!(c.report(), "interval len=1\ninterval len=1\ndouble_points=1\n");
    }

    #[test]
    fn dual_round_trips() {
        for q in [cube_sphere(), grid_torus(2, 2), pillow_sphere(), klein_grid(1, 3), rp2_min()] {
            let c = extract_curves(&q).unwrap();
            assert!(is_admissible(&c.arrangement));
            let back = dual_cubication(&c.arrangement).unwrap();
            assert!(is_isomorphic(&back, &q).unwrap());
        }
    }

    #[test]
    fn dual_rejects_boundary() {
        let c = extract_curves(&disk_grid(2, 2)).unwrap();
        assert_eq!(dual_cubication(&c.arrangement), Err(CurveError::HasBoundary));
    }

    /// A figure-eight with both lobes bounding disks, drawn directly as a
    /// map: one 4-valent vertex, two loops, three regions.
    #[test]
    fn one_vertex_sphere_arrangement() {
        // same darts as the one-square sphere, involutions exchanged
        let mut b = QuadBuilder::new(1);
        b.glue(0, 0, 0, 1, true).glue(0, 2, 0, 3, true);
        let g = b.into_gmap();
        let arrangement = Arrangement::new(g.dual(), SurfaceClass::sphere()).unwrap();
        assert_eq!(double_points(&arrangement), 1);
        let q = dual_cubication(&arrangement).unwrap();
        assert_eq!(q.n_faces(), 1);
        assert_eq!(classify_surface(&q).unwrap(), SurfaceClass::sphere());
    }

    /// A single embedded circle, cut into two arcs by two 2-valent marks;
    /// lives on one face of a "sphere" built from two bigons.
    fn circle_map() -> GMap {
        // two bigon faces glued along both sides: darts 0..8
        let a0: Vec<Dart> = vec![1, 0, 3, 2, 5, 4, 7, 6];
        let a1: Vec<Dart> = vec![3, 2, 1, 0, 7, 6, 5, 4];
        let a2: Vec<Dart> = vec![4, 5, 6, 7, 0, 1, 2, 3];
        GMap::new(a0, a1, a2).unwrap()
    }

    #[test]
    fn two_disjoint_circles_not_admissible() {
        let one = circle_map();
        // disjoint union of two copies
        let mut links: Vec<[Dart; 3]> = one.links().to_vec();
        links.extend(one.links().iter().map(|l| [l[0] + 8, l[1] + 8, l[2] + 8]));
        let two = GMap::from_links(links);
        let a = Arrangement::new(two, SurfaceClass::sphere()).unwrap();
        assert!(!is_admissible(&a));
        assert_eq!(double_points(&a), 0);
        let single = Arrangement::new(one, SurfaceClass::sphere()).unwrap();
        assert!(is_admissible(&single));
    }

    #[test]
    fn null_homotopic_circle_on_torus_rejected() {
        assert_eq!(
            Arrangement::new(circle_map(), SurfaceClass::torus()).unwrap_err(),
            CurveError::NonCellular
        );
    }

    #[test]
    fn empty_arrangement() {
        let a = Arrangement::empty(SurfaceClass::sphere());
        assert!(!is_admissible(&a));
        assert_eq!(double_points(&a), 0);
        assert_eq!(dual_cubication(&a), Err(CurveError::NotAdmissible));
    }

    #[test]
    fn dot_outputs() {
        let q = disk_grid(1, 1);
        let s = skeleton_dot(&q);
        assert_eq!(s.matches("--").count(), 4);
        assert_eq!(s.matches("dashed").count(), 4);
        let a = extract_curves(&q).unwrap().arrangement.to_dot();
        assert_eq!(a.matches("--").count(), 4);
    }
}
