//! Exhaustive generation of small cubications.
//!
//! Squares are added one at a time in breadth-first order. The first side
//! still open is either glued to another open side, glued to side 0 of a
//! new square, or declared boundary. A new square is always attached the
//! same way round, so every labelled outcome is a rooting of its class and
//! classes are recovered by canonical code. Branches are cut when the Euler
//! genus of the partial surface (open sides counting as boundary) already
//! exceeds the target's, which is safe because gluing never lowers it.

use std::collections::BTreeMap;

use crate::canon::{canonical_form, is_minimal_root, CanonicalCode};
use crate::gmap::{standard_a0, standard_a1, Dart, GMap, QuadGMap};
use crate::surface::{boundary_signature, classify_surface, BoundarySignature, SurfaceClass};

struct Search<'a> {
    target: &'a SurfaceClass,
    boundary: Option<&'a BoundarySignature>,
    max_faces: usize,
    max_boundary_edges: usize,
    a2: Vec<Dart>,
    declared: Vec<bool>,
    boundary_edges: usize,
    found: BTreeMap<CanonicalCode, QuadGMap>,
    seen: Vec<u32>,
    epoch: u32,
    stack: Vec<Dart>,
}

impl Search<'_> {
    fn n_faces(&self) -> usize {
        self.a2.len() / 8
    }

    fn side_open(&self, side: usize) -> bool {
        let d = 2 * side;
        self.a2[d] == d as Dart && !self.declared[side]
    }

    fn glue(&mut self, s: usize, t: usize, reversed: bool) {
        let (fs, fe) = (2 * s as Dart, 2 * s as Dart + 1);
        let (gs, ge) = (2 * t as Dart, 2 * t as Dart + 1);
        let (x, y) = if reversed { (ge, gs) } else { (gs, ge) };
        self.a2[fs as usize] = x;
        self.a2[x as usize] = fs;
        self.a2[fe as usize] = y;
        self.a2[y as usize] = fe;
    }

    fn unglue(&mut self, s: usize, t: usize) {
        for d in [2 * s, 2 * s + 1, 2 * t, 2 * t + 1] {
            self.a2[d] = d as Dart;
        }
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        self.epoch
    }

    /// Euler genus `2 − χ − b` of the partial surface.
    fn partial_euler_genus(&mut self) -> i64 {
        let n = self.a2.len();
        if self.seen.len() < n {
            self.seen.resize(n, 0);
        }
        let epoch = self.next_epoch();
        let mut vertices = 0i64;
        let mut stack = std::mem::take(&mut self.stack);
        for start in 0..n {
            if self.seen[start] == epoch {
                continue;
            }
            vertices += 1;
            self.seen[start] = epoch;
            stack.push(start as Dart);
            while let Some(d) = stack.pop() {
                for e in [standard_a1(d), self.a2[d as usize]] {
                    if self.seen[e as usize] != epoch {
                        self.seen[e as usize] = epoch;
                        stack.push(e);
                    }
                }
            }
        }
        self.stack = stack;
        let glued = (0..n).filter(|&d| self.a2[d] as usize != d).count() / 2;
        let sides = n / 2;
        let open = sides - glued;
        let edges = (glued / 2 + open) as i64;
        let faces = self.n_faces() as i64;
        let boundary = self.boundary_components();
        2 - (vertices - edges + faces) - boundary
    }

    fn boundary_components(&mut self) -> i64 {
        let n = self.a2.len();
        let epoch = self.next_epoch();
        let mut count = 0;
        for start in 0..n {
            if self.a2[start] as usize != start || self.seen[start] == epoch {
                continue;
            }
            count += 1;
            let mut d = start as Dart;
            loop {
                let e = standard_a0(d);
                self.seen[d as usize] = epoch;
                self.seen[e as usize] = epoch;
                let mut x = standard_a1(e);
                while self.a2[x as usize] != x {
                    x = standard_a1(self.a2[x as usize]);
                }
                d = x;
                if d as usize == start {
                    break;
                }
            }
        }
        count
    }

    fn record(&mut self) {
        let links = (0..self.a2.len() as Dart)
            .map(|d| [standard_a0(d), standard_a1(d), self.a2[d as usize]])
            .collect();
        let map = GMap::from_links(links);
        // every rooting of a class is produced; keep those rooted at a minimal start
        if !is_minimal_root(&map, 0) {
            return;
        }
        let Ok(q) = QuadGMap::new(map) else { return };
        match classify_surface(&q) {
            Ok(c) if &c == self.target => {}
            _ => return,
        }
        if let Some(sig) = self.boundary {
            if &boundary_signature(&q) != sig {
                return;
            }
        }
        let form = canonical_form(&q).expect("connected by construction");
        self.found.entry(form.code).or_insert_with(|| q.relabel(&form.labels));
    }

    fn run(&mut self) {
        let sides = self.a2.len() / 2;
        let Some(s) = (0..sides).find(|&s| self.side_open(s)) else {
            self.record();
            return;
        };
        let target_genus = self.target.euler_genus() as i64;
        let orientations: &[bool] = if self.target.orientable { &[true] } else { &[true, false] };
        for t in s + 1..sides {
            if !self.side_open(t) {
                continue;
            }
            for &rev in orientations {
                self.glue(s, t, rev);
                if self.partial_euler_genus() <= target_genus {
                    self.run();
                }
                self.unglue(s, t);
            }
        }
        if self.n_faces() < self.max_faces {
            let f = self.n_faces();
            let base = self.a2.len() as Dart;
            self.a2.extend(base..base + 8);
            self.declared.extend([false; 4]);
            self.glue(s, 4 * f, true);
            self.run();
            self.unglue(s, 4 * f);
            self.a2.truncate(base as usize);
            self.declared.truncate(4 * f);
        }
        if self.boundary_edges < self.max_boundary_edges {
            self.declared[s] = true;
            self.boundary_edges += 1;
            self.run();
            self.boundary_edges -= 1;
            self.declared[s] = false;
        }
    }
}

/// All isomorphism classes of cubications of `surface` with at most
/// `max_faces` squares, optionally with a prescribed boundary signature.
/// Returned in canonical labelling, ordered by face count then code.
pub fn enumerate_cubications(
    surface: &SurfaceClass,
    max_faces: usize,
    boundary: Option<&BoundarySignature>,
) -> Vec<QuadGMap> {
    if let Some(sig) = boundary {
        if sig.components() != surface.boundary_count {
            return Vec::new();
        }
    }
    let max_boundary_edges = match (surface.boundary_count, boundary) {
        (0, _) => 0,
        (_, Some(sig)) => sig.total_edges(),
        (_, None) => 4 * max_faces,
    };
    let mut search = Search {
        target: surface,
        boundary,
        max_faces,
        max_boundary_edges,
        a2: (0..8).collect(),
        declared: vec![false; 4],
        boundary_edges: 0,
        found: BTreeMap::new(),
        seen: Vec::new(),
        epoch: 0,
        stack: Vec::new(),
    };
    if max_faces >= 1 {
        search.run();
    }
    let mut out: Vec<(usize, CanonicalCode, QuadGMap)> =
        search.found.into_iter().map(|(c, q)| (q.n_faces(), c, q)).collect();
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    out.into_iter().map(|(_, _, q)| q).collect()
}
