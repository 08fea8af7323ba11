//! Topological type of the surface carried by a cubication.

use std::fmt;

use thiserror::Error;

use crate::gmap::{Dart, GMap, QuadGMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("complex is not connected")]
    Disconnected,
}

/// Compact connected surface up to homeomorphism.
///
/// `genus` is the handle count for orientable surfaces and the crosscap
/// count otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceClass {
    pub euler: i64,
    pub orientable: bool,
    pub boundary_count: usize,
    pub genus: usize,
}

impl SurfaceClass {
    pub fn orientable(genus: usize, boundary_count: usize) -> Self {
        Self {
            euler: 2 - 2 * genus as i64 - boundary_count as i64,
            orientable: true,
            boundary_count,
            genus,
        }
    }

    pub fn non_orientable(crosscaps: usize, boundary_count: usize) -> Self {
        assert!(crosscaps > 0, "a non-orientable surface has at least one crosscap");
        Self {
            euler: 2 - crosscaps as i64 - boundary_count as i64,
            orientable: false,
            boundary_count,
            genus: crosscaps,
        }
    }

    pub fn sphere() -> Self {
        Self::orientable(0, 0)
    }
    pub fn torus() -> Self {
        Self::orientable(1, 0)
    }
    pub fn disk() -> Self {
        Self::orientable(0, 1)
    }
    pub fn annulus() -> Self {
        Self::orientable(0, 2)
    }
    pub fn projective_plane() -> Self {
        Self::non_orientable(1, 0)
    }
    pub fn klein_bottle() -> Self {
        Self::non_orientable(2, 0)
    }
    pub fn moebius_strip() -> Self {
        Self::non_orientable(1, 1)
    }

    /// `2 - χ - b`: non-decreasing while gluing polygons together.
    pub fn euler_genus(&self) -> usize {
        (2 - self.euler - self.boundary_count as i64) as usize
    }

    pub fn is_closed(&self) -> bool {
        self.boundary_count == 0
    }

    pub fn name(&self) -> String {
        match (self.orientable, self.genus, self.boundary_count) {
            (true, 0, 0) => "sphere".into(),
            (true, 0, 1) => "disk".into(),
            (true, 0, 2) => "annulus".into(),
            (true, 1, 0) => "torus".into(),
            (false, 1, 0) => "projective plane".into(),
            (false, 1, 1) => "Moebius strip".into(),
            (false, 2, 0) => "Klein bottle".into(),
            (true, g, b) => format!("orientable genus {g} with {b} boundary components"),
            (false, k, b) => format!("non-orientable genus {k} with {b} boundary components"),
        }
    }

    /// Parses the names accepted on the command line.
    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name.to_ascii_lowercase().replace(['-', '_', ' '], "").as_str() {
            "sphere" => Self::sphere(),
            "torus" => Self::torus(),
            "disk" | "disc" => Self::disk(),
            "annulus" => Self::annulus(),
            "rp2" | "projectiveplane" => Self::projective_plane(),
            "klein" | "kleinbottle" => Self::klein_bottle(),
            "moebius" | "mobius" | "moebiusstrip" => Self::moebius_strip(),
            _ => return None,
        })
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} χ={} b={}",
            self.name(),
            if self.orientable { "orientable" } else { "non-orientable" },
            self.euler,
            self.boundary_count
        )
    }
}

/// 2-colours the darts so every involution pair that is not a fixed point
/// is bicoloured; succeeds exactly on orientable components.
pub fn is_orientable(map: &GMap) -> bool {
    let n = map.n_darts();
    let mut colour = vec![u8::MAX; n];
    let mut stack = Vec::new();
    for start in 0..n {
        if colour[start] != u8::MAX {
            continue;
        }
        colour[start] = 0;
        stack.push(start as Dart);
        while let Some(d) = stack.pop() {
            let c = colour[d as usize];
            for i in 0..3 {
                let e = map.alpha(i, d);
                if e == d {
                    continue;
                }
                match colour[e as usize] {
                    u8::MAX => {
                        colour[e as usize] = 1 - c;
                        stack.push(e);
                    }
                    x if x == c => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// From a boundary dart, walks around its vertex to the other boundary dart.
pub(crate) fn boundary_vertex_step(map: &GMap, d: Dart) -> Dart {
    let mut x = map.alpha(1, d);
    while map.alpha(2, x) != x {
        x = map.alpha(1, map.alpha(2, x));
    }
    x
}

/// Boundary components as dart cycles; each component lists its darts in
/// traversal order (two per boundary edge).
pub(crate) fn boundary_cycles(map: &GMap) -> Vec<Vec<Dart>> {
    let n = map.n_darts();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in map.darts() {
        if seen[start as usize] || !map.is_boundary_dart(start) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut d = start;
        loop {
            let e = map.alpha(0, d);
            seen[d as usize] = true;
            seen[e as usize] = true;
            cycle.push(d);
            cycle.push(e);
            d = boundary_vertex_step(map, e);
            if d == start {
                break;
            }
        }
        cycles.push(cycle);
    }
    cycles
}

/// Induced cubication of the boundary: one polygon per component, which is
/// determined up to isomorphism by its edge count.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BoundarySignature {
    /// Edge count per boundary component, sorted ascending.
    pub edge_counts: Vec<usize>,
}

impl BoundarySignature {
    pub fn of(map: &GMap) -> Self {
        let mut edge_counts: Vec<usize> =
            boundary_cycles(map).iter().map(|c| c.len() / 2).collect();
        edge_counts.sort_unstable();
        Self { edge_counts }
    }

    pub fn components(&self) -> usize {
        self.edge_counts.len()
    }

    pub fn total_edges(&self) -> usize {
        self.edge_counts.iter().sum()
    }

    /// Parses `4` or `4,6`; `-` or an empty string is the closed signature.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" || s == "none" {
            return Some(Self::default());
        }
        let mut edge_counts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().ok().filter(|&k| k > 0))
            .collect::<Option<Vec<_>>>()?;
        edge_counts.sort_unstable();
        Some(Self { edge_counts })
    }
}

impl fmt::Display for BoundarySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.edge_counts.is_empty() {
            return write!(f, "-");
        }
        let parts: Vec<String> = self.edge_counts.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Classifies any connected generalized map whose faces are disks.
pub fn classify_map(map: &GMap) -> Result<SurfaceClass, TopologyError> {
    if !map.is_connected() {
        return Err(TopologyError::Disconnected);
    }
    let cells = map.cells();
    let euler = cells.vertices.count as i64 - cells.edges.count as i64 + cells.faces.count as i64;
    let boundary_count = boundary_cycles(map).len();
    let orientable = is_orientable(map);
    let deficit = 2 - euler - boundary_count as i64;
    let genus = if orientable { deficit / 2 } else { deficit };
    Ok(SurfaceClass { euler, orientable, boundary_count, genus: genus as usize })
}

pub fn classify_surface(q: &QuadGMap) -> Result<SurfaceClass, TopologyError> {
    classify_map(q.gmap())
}

pub fn boundary_signature(q: &QuadGMap) -> BoundarySignature {
    BoundarySignature::of(q.gmap())
}
