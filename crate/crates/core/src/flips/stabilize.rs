//! Stabilization: adding to the curve system the boundary circle of a
//! regular neighbourhood of an arc λ.
//!
//! The arc runs through the complementary regions of the curves, which are
//! the vertices of the cubication, and crosses one curve on every edge it
//! follows; so λ is an edge path `e_1 … e_k`. On the cubication side the
//! path is slit open and a strip of `2k` squares is sewn in: `L_i` along the
//! side of `e_i` facing the start dart, `R_i` along the other side, with
//! corners `(v_{i-1}, v_i, c_i, c_{i-1})` where the `c_i` are the new
//! regions inside the circle.

use crate::bits::{solve, BitVec};
use crate::gmap::{standard_a0, standard_a1, Dart, GMap, QuadGMap};
use crate::homology::{Chain, MarkedCubication};

use super::{check_preserved, FlipError};

/// An edge path given by its first dart and, at each inner vertex, how many
/// corners to turn through (from the incoming edge, on the side of the
/// start dart's face) to reach the next edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPath {
    pub start: Dart,
    pub turns: Vec<usize>,
}

impl DualPath {
    /// λ crossing one curve once, along the edge of `start`.
    pub fn trivial(start: Dart) -> Self {
        Self { start, turns: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.turns.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Darts `d_1 … d_k`: `d_i` lies on `e_i` at `v_{i-1}`.
    pub fn darts(&self, g: &GMap) -> Result<Vec<Dart>, FlipError> {
        if self.start as usize >= g.n_darts() {
            return Err(FlipError::NotTransverse(format!("dart {} out of range", self.start)));
        }
        let mut out = vec![self.start];
        for &t in &self.turns {
            if t == 0 {
                return Err(FlipError::NotTransverse("zero turn".into()));
            }
            let mut x = g.alpha(1, g.alpha(0, *out.last().unwrap()));
            for _ in 1..t {
                let y = g.alpha(2, x);
                if y == x {
                    return Err(FlipError::NotTransverse("turn runs into the boundary".into()));
                }
                x = g.alpha(1, y);
            }
            out.push(x);
        }
        Ok(out)
    }
}

/// The complex with the strip sewn in, plus the first new dart.
fn sew(q: &QuadGMap, path: &DualPath) -> Result<(QuadGMap, Dart), FlipError> {
    let g = q.gmap();
    let ds = path.darts(g)?;
    let k = ds.len();
    if k >= 2 {
        let vid = g.orbits(&[1, 2]).id;
        let eid = g.orbits(&[0, 2]).id;
        let mut verts = vec![vid[ds[0] as usize]];
        verts.extend(ds.iter().map(|&d| vid[g.alpha(0, d) as usize]));
        let inner = &verts[1..k];
        for (i, v) in inner.iter().enumerate() {
            if inner[..i].contains(v) || *v == verts[0] || *v == verts[k] {
                return Err(FlipError::NotTransverse("path revisits a vertex".into()));
            }
        }
        let mut edges: Vec<u32> = ds.iter().map(|&d| eid[d as usize]).collect();
        edges.sort_unstable();
        edges.dedup();
        if edges.len() != k {
            return Err(FlipError::NotTransverse("path repeats an edge".into()));
        }
        if ds.iter().any(|&d| g.is_boundary_dart(d)) {
            return Err(FlipError::NotTransverse("path runs along the boundary".into()));
        }
    }

    let n = g.n_darts() as Dart;
    let mut links: Vec<[Dart; 3]> = g.links().to_vec();
    let total = n as usize + 16 * k;
    links.extend((n..total as Dart).map(|d| [standard_a0(d), standard_a1(d), d]));
    let face_l = |i: usize| n + 16 * i as Dart;
    let face_r = |i: usize| n + 16 * i as Dart + 8;
    let start = |f: Dart, s: Dart| f + 2 * s;
    let end = |f: Dart, s: Dart| f + 2 * s + 1;
    let mut pair = |x: Dart, y: Dart| {
        links[x as usize][2] = y;
        links[y as usize][2] = x;
    };
    for (i, &d) in ds.iter().enumerate() {
        let (l, r) = (face_l(i), face_r(i));
        let e = g.alpha(2, d);
        let (a0d, a0e) = (g.alpha(0, d), g.alpha(0, e));
        pair(start(l, 0), d);
        pair(end(l, 0), a0d);
        if e != d {
            pair(start(r, 0), e);
            pair(end(r, 0), a0e);
        }
        pair(start(l, 2), start(r, 2));
        pair(end(l, 2), end(r, 2));
        if i + 1 < k {
            let (l2, r2) = (face_l(i + 1), face_r(i + 1));
            pair(start(l, 1), end(l2, 3));
            pair(end(l, 1), start(l2, 3));
            pair(start(r, 1), end(r2, 3));
            pair(end(r, 1), start(r2, 3));
        } else {
            pair(start(l, 1), start(r, 1));
            pair(end(l, 1), end(r, 1));
        }
        if i == 0 {
            pair(start(l, 3), start(r, 3));
            pair(end(l, 3), end(r, 3));
        }
    }
    let out = QuadGMap::new(GMap::from_links(links))
        .map_err(|r| FlipError::NotTransverse(format!("slit does not close up: {r}")))?;
    check_preserved(q, &out).map_err(|_| FlipError::NotTransverse("path is not embedded".into()))?;
    Ok((out, n))
}

pub fn stabilize_complex(q: &QuadGMap, path: &DualPath) -> Result<QuadGMap, FlipError> {
    sew(q, path).map(|(out, _)| out)
}

/// Stabilizes a marked complex. Reference cycles crossing the slit are
/// closed up through the strip's interior edges, which form a tree.
pub fn stabilize(m: &MarkedCubication, path: &DualPath) -> Result<MarkedCubication, FlipError> {
    let q = m.complex();
    let (out, first_new) = sew(q, path)?;
    let g = q.gmap();
    let ng = out.gmap();
    let old_edges = g.orbits(&[0, 2]);
    let new_edges = ng.orbits(&[0, 2]);
    let new_vertices = ng.orbits(&[1, 2]);
    let reps = old_edges.representatives();
    let new_reps = new_edges.representatives();

    let mut usable = Vec::new();
    let mut columns = Vec::new();
    let mut seen = vec![false; new_edges.count];
    for x in first_new..ng.n_darts() as Dart {
        let e = new_edges.id[x as usize] as usize;
        if seen[e] {
            continue;
        }
        seen[e] = true;
        let orbit = ng.orbit(x, &[0, 2]);
        if orbit.iter().any(|&y| y < first_new || ng.is_boundary_dart(y)) {
            continue;
        }
        let (u, w) = (new_vertices.id[x as usize] as usize, new_vertices.id[ng.alpha(0, x) as usize] as usize);
        usable.push(e);
        columns.push(BitVec::from_indices(new_vertices.count, if u == w { vec![] } else { vec![u, w] }));
    }

    let mut cycles = Vec::new();
    for (k, rho) in m.reference_cycles().iter().enumerate() {
        let mut chain = Chain::zero(1, new_edges.count);
        for e in rho.cells() {
            chain.bits.flip(new_edges.id[reps[e] as usize] as usize);
        }
        let mut defect = BitVec::zeros(new_vertices.count);
        for e in chain.cells() {
            let d = new_reps[e];
            let (u, w) = (new_vertices.id[d as usize] as usize, new_vertices.id[ng.alpha(0, d) as usize] as usize);
            if u != w {
                defect.flip(u);
                defect.flip(w);
            }
        }
        let x = solve(&columns, &defect).ok_or(FlipError::RerouteFailed(k))?;
        for i in x.ones() {
            chain.bits.flip(usable[i]);
        }
        cycles.push(chain);
    }
    Ok(MarkedCubication::new(out, cycles)?)
}
