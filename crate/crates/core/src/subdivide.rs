//! Splitting every square into four.
//!
//! Dart `d` of the original complex becomes darts `4d..4d+4` of the
//! subdivision: `4d` sits at the original vertex on the half-edge, `4d+1` at
//! the edge midpoint on the half-edge, `4d+2` at the midpoint on the spoke and
//! `4d+3` at the face centre on the spoke. Spokes are the halves of the two
//! section arcs drawn in each square.

use crate::gmap::{Cells, Dart, GMap, QuadGMap};

/// Which original cell a vertex of the subdivision comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexOrigin {
    Vertex(usize),
    Midpoint(usize),
    Center(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeOrigin {
    /// Half of an original edge.
    HalfEdge(usize),
    /// Centre-to-midpoint segment inside an original face.
    Spoke(usize),
}

#[derive(Clone, Debug)]
pub struct SubdividedComplex {
    pub complex: QuadGMap,
    pub cells: Cells,
    pub vertex_origin: Vec<VertexOrigin>,
    pub edge_origin: Vec<EdgeOrigin>,
    /// Original face of each small square.
    pub face_origin: Vec<usize>,
    pub vertex_on_boundary: Vec<bool>,
    pub edge_on_boundary: Vec<bool>,
}

#[inline]
pub fn sub_dart(d: Dart, k: u32) -> Dart {
    4 * d + k
}

impl SubdividedComplex {
    pub fn n_vertices(&self) -> usize {
        self.cells.vertices.count
    }
    pub fn n_edges(&self) -> usize {
        self.cells.edges.count
    }
    pub fn n_faces(&self) -> usize {
        self.cells.faces.count
    }

    pub fn spokes(&self) -> impl Iterator<Item = usize> + '_ {
        self.edge_origin
            .iter()
            .enumerate()
            .filter(|(_, o)| matches!(o, EdgeOrigin::Spoke(_)))
            .map(|(e, _)| e)
    }

    pub fn half_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.edge_origin
            .iter()
            .enumerate()
            .filter(|(_, o)| matches!(o, EdgeOrigin::HalfEdge(_)))
            .map(|(e, _)| e)
    }

    /// Endpoints of every edge (equal for loops).
    pub fn edge_endpoints(&self) -> Vec<(usize, usize)> {
        let g = self.complex.gmap();
        self.cells
            .edges
            .representatives()
            .into_iter()
            .map(|d| {
                let v = &self.cells.vertices.id;
                (v[d as usize] as usize, v[g.alpha(0, d) as usize] as usize)
            })
            .collect()
    }

    /// Edges of every small face, as darts visited once per side.
    pub fn face_edges(&self) -> Vec<Vec<usize>> {
        let g = self.complex.gmap();
        let mut out = vec![Vec::new(); self.n_faces()];
        for d in g.darts() {
            // each side contributes two darts; count it once via the even one
            // of its a0 pair within the face
            if d < g.alpha(0, d) {
                let f = self.cells.faces.id[d as usize] as usize;
                out[f].push(self.cells.edges.id[d as usize] as usize);
            }
        }
        out
    }
}

pub fn subdivide(q: &QuadGMap) -> SubdividedComplex {
    let g = q.gmap();
    let n = g.n_darts();
    let mut links = vec![[0 as Dart; 3]; 4 * n];
    for d in g.darts() {
        let (a0, a1, a2) = (g.alpha(0, d), g.alpha(1, d), g.alpha(2, d));
        links[sub_dart(d, 0) as usize] = [sub_dart(d, 1), sub_dart(a1, 0), sub_dart(a2, 0)];
        links[sub_dart(d, 1) as usize] = [sub_dart(d, 0), sub_dart(d, 2), sub_dart(a2, 1)];
        links[sub_dart(d, 2) as usize] = [sub_dart(d, 3), sub_dart(d, 1), sub_dart(a0, 2)];
        links[sub_dart(d, 3) as usize] = [sub_dart(d, 2), sub_dart(a1, 3), sub_dart(a0, 3)];
    }
    let map = GMap::from_links(links);
    let complex = QuadGMap::new_unchecked(map);
    let cells = complex.gmap().cells();
    let orig = g.cells();

    let vertex_origin = cells
        .vertices
        .representatives()
        .into_iter()
        .map(|sd| {
            let d = (sd / 4) as usize;
            match sd % 4 {
                0 => VertexOrigin::Vertex(orig.vertices.id[d] as usize),
                1 | 2 => VertexOrigin::Midpoint(orig.edges.id[d] as usize),
                _ => VertexOrigin::Center(orig.faces.id[d] as usize),
            }
        })
        .collect();
    let edge_origin = cells
        .edges
        .representatives()
        .into_iter()
        .map(|sd| {
            let d = (sd / 4) as usize;
            match sd % 4 {
                0 | 1 => EdgeOrigin::HalfEdge(orig.edges.id[d] as usize),
                _ => EdgeOrigin::Spoke(orig.faces.id[d] as usize),
            }
        })
        .collect();
    let face_origin = cells
        .faces
        .representatives()
        .into_iter()
        .map(|sd| orig.faces.id[(sd / 4) as usize] as usize)
        .collect();

    let sg = complex.gmap();
    let mut vertex_on_boundary = vec![false; cells.vertices.count];
    let mut edge_on_boundary = vec![false; cells.edges.count];
    for d in sg.darts().filter(|&d| sg.is_boundary_dart(d)) {
        vertex_on_boundary[cells.vertices.id[d as usize] as usize] = true;
        edge_on_boundary[cells.edges.id[d as usize] as usize] = true;
    }

    SubdividedComplex {
        complex,
        cells,
        vertex_origin,
        edge_origin,
        face_origin,
        vertex_on_boundary,
        edge_on_boundary,
    }
}
