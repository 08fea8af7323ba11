//! Patches of the cube boundary, rewrite rules between complementary
//! patches, dart-level matching and substitution.

use std::sync::OnceLock;

use crate::gmap::{Dart, GMap, QuadBuilder, QuadGMap, ValidationReport};
use crate::models::cube_sphere;
use crate::surface::boundary_cycles;

pub(crate) const NONE: Dart = Dart::MAX;

/// A connected union of squares with its own dart numbering; sides that
/// are not glued inside the patch are `a2`-fixed.
#[derive(Clone, Debug)]
pub struct Pattern {
    map: GMap,
    vertex: Vec<u32>,
    n_vertices: usize,
    edge: Vec<u32>,
    n_edges: usize,
}

impl Pattern {
    pub(crate) fn new(map: GMap) -> Self {
        let v = map.orbits(&[1, 2]);
        let e = map.orbits(&[0, 2]);
        Self { map, vertex: v.id, n_vertices: v.count, edge: e.id, n_edges: e.count }
    }

    /// The sub-patch of a standard-layout host made of the given faces.
    /// Local darts follow the host order; returns the local-to-host map.
    pub(crate) fn from_faces(host: &GMap, faces: &[usize]) -> (Self, Vec<Dart>) {
        let mut to_host: Vec<Dart> =
            faces.iter().flat_map(|&f| (8 * f as Dart)..(8 * f as Dart + 8)).collect();
        to_host.sort_unstable();
        let local = |h: Dart| to_host.binary_search(&h).ok().map(|i| i as Dart);
        let links = to_host
            .iter()
            .enumerate()
            .map(|(p, &h)| {
                let p = p as Dart;
                [
                    local(host.alpha(0, h)).unwrap(),
                    local(host.alpha(1, h)).unwrap(),
                    local(host.alpha(2, h)).unwrap_or(p),
                ]
            })
            .collect();
        (Self::new(GMap::from_links(links)), to_host)
    }

    pub fn n_darts(&self) -> usize {
        self.map.n_darts()
    }

    pub fn n_faces(&self) -> usize {
        self.n_darts() / 8
    }

    pub fn map(&self) -> &GMap {
        &self.map
    }

    #[inline]
    pub fn alpha(&self, i: usize, p: Dart) -> Dart {
        self.map.alpha(i, p)
    }

    #[inline]
    pub fn is_boundary(&self, p: Dart) -> bool {
        self.map.is_boundary_dart(p)
    }

    pub(crate) fn vertex(&self, p: Dart) -> usize {
        self.vertex[p as usize] as usize
    }

    pub(crate) fn edge(&self, p: Dart) -> usize {
        self.edge[p as usize] as usize
    }

    pub(crate) fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub(crate) fn n_edges(&self) -> usize {
        self.n_edges
    }

    /// Endpoints of every local edge.
    pub(crate) fn edge_endpoints(&self) -> Vec<(usize, usize)> {
        let mut out = vec![(0, 0); self.n_edges];
        for p in self.map.darts() {
            out[self.edge(p)] = (self.vertex(p), self.vertex(self.alpha(0, p)));
        }
        out
    }

    /// The single boundary cycle of a disk patch, two darts per side.
    pub(crate) fn boundary_cycle(&self) -> Vec<Dart> {
        let mut cycles = boundary_cycles(&self.map);
        assert_eq!(cycles.len(), 1, "patch is not a disk");
        cycles.pop().unwrap()
    }
}

/// Reusable scratch space for matching patterns into a complex.
#[derive(Default)]
pub(crate) struct Matcher {
    stamp: Vec<u32>,
    epoch: u32,
    stack: Vec<Dart>,
}

impl Matcher {
    /// The morphism sending local dart 0 to `c`: commutes with `a0`, `a1`
    /// everywhere and with `a2` on darts interior to the pattern, and is
    /// injective on darts.
    pub fn match_at(&mut self, pat: &Pattern, g: &GMap, c: Dart, image: &mut Vec<Dart>) -> bool {
        let n = g.n_darts();
        if self.stamp.len() < n {
            self.stamp.resize(n, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        image.clear();
        image.resize(pat.n_darts(), NONE);
        image[0] = c;
        self.stamp[c as usize] = self.epoch;
        self.stack.clear();
        self.stack.push(0);
        while let Some(p) = self.stack.pop() {
            let x = image[p as usize];
            for i in 0..3 {
                if i == 2 && pat.is_boundary(p) {
                    continue;
                }
                let pp = pat.alpha(i, p);
                let xx = g.alpha(i, x);
                let slot = image[pp as usize];
                if slot != NONE {
                    if slot != xx {
                        return false;
                    }
                } else {
                    if self.stamp[xx as usize] == self.epoch {
                        return false;
                    }
                    self.stamp[xx as usize] = self.epoch;
                    image[pp as usize] = xx;
                    self.stack.push(pp);
                }
            }
        }
        true
    }
}

/// Replace a matched copy of `from` by `to`, gluing `to`'s boundary dart
/// `q` where `from`'s boundary dart `bmap[q]` was glued.
#[derive(Clone, Debug)]
pub(crate) struct Rewrite {
    pub from: Pattern,
    pub to: Pattern,
    pub bmap: Vec<Dart>,
    pub bmap_inv: Vec<Dart>,
    /// Local darts `σ(0)` over the automorphisms `σ` of `from`.
    pub root_orbit: Vec<Dart>,
    /// For every boundary vertex of `to`, the boundary vertex of `from` it
    /// replaces.
    pub vertex_corr: Vec<Option<usize>>,
}

impl Rewrite {
    pub fn new(from: Pattern, to: Pattern, bmap: Vec<Dart>) -> Self {
        let mut bmap_inv = vec![NONE; from.n_darts()];
        for (q, &p) in bmap.iter().enumerate() {
            if p != NONE {
                debug_assert!(to.is_boundary(q as Dart) && from.is_boundary(p));
                bmap_inv[p as usize] = q as Dart;
            }
        }
        let mut vertex_corr = vec![None; to.n_vertices()];
        for (q, &p) in bmap.iter().enumerate() {
            if p != NONE {
                vertex_corr[to.vertex(q as Dart)] = Some(from.vertex(p));
            }
        }
        let mut m = Matcher::default();
        let mut img = Vec::new();
        let root_orbit = from
            .map()
            .darts()
            .filter(|&p| m.match_at(&from, from.map(), p, &mut img))
            .collect();
        Self { from, to, bmap, bmap_inv, root_orbit, vertex_corr }
    }

    /// The same rule with the boundary correspondence turned by `shift`
    /// sides; used when `from` and `to` are copies of one patch.
    pub fn rotated(pat: &Pattern, shift: isize) -> Self {
        let cycle = pat.boundary_cycle();
        let len = cycle.len() as isize;
        let mut bmap = vec![NONE; pat.n_darts()];
        for (i, &q) in cycle.iter().enumerate() {
            let j = (i as isize + 2 * shift).rem_euclid(len) as usize;
            bmap[q as usize] = cycle[j];
        }
        Self::new(pat.clone(), pat.clone(), bmap)
    }
}

/// Outcome of a substitution.
pub(crate) struct Substitution {
    pub result: QuadGMap,
    /// New name of every dart of the old complex, `NONE` if removed.
    pub new_index: Vec<Dart>,
    /// Dart `q` of the inserted patch is named `patch_base + q`.
    pub patch_base: Dart,
}

pub(crate) fn substitute(
    g: &GMap,
    rw: &Rewrite,
    image: &[Dart],
) -> Result<Substitution, ValidationReport> {
    let n = g.n_darts();
    let mut pre = vec![NONE; n];
    for (p, &c) in image.iter().enumerate() {
        pre[c as usize] = p as Dart;
    }
    let mut new_index = vec![NONE; n];
    let mut k: Dart = 0;
    for c in 0..n {
        if pre[c] == NONE {
            new_index[c] = k;
            k += 1;
        }
    }
    let base = k;
    let total = k as usize + rw.to.n_darts();
    let mut links = vec![[0 as Dart; 3]; total];
    for c in 0..n as Dart {
        let nc = new_index[c as usize];
        if nc == NONE {
            continue;
        }
        let x = g.alpha(2, c);
        let a2 = match pre[x as usize] {
            NONE => new_index[x as usize],
            p => base + rw.bmap_inv[p as usize],
        };
        links[nc as usize] =
            [new_index[g.alpha(0, c) as usize], new_index[g.alpha(1, c) as usize], a2];
    }
    for q in rw.to.map().darts() {
        let a2 = if rw.to.is_boundary(q) {
            let p = rw.bmap[q as usize];
            let mp = image[p as usize];
            let c = g.alpha(2, mp);
            if c == mp {
                base + q
            } else if pre[c as usize] != NONE {
                base + rw.bmap_inv[pre[c as usize] as usize]
            } else {
                new_index[c as usize]
            }
        } else {
            base + rw.to.alpha(2, q)
        };
        links[(base + q) as usize] = [base + rw.to.alpha(0, q), base + rw.to.alpha(1, q), a2];
    }
    let result = QuadGMap::new(GMap::from_links(links))?;
    Ok(Substitution { result, new_index, patch_base: base })
}

/// The cube patches: P1 = bottom square, P2 = bottom and front, P3 = the
/// three squares at vertex 0, and the row front, bottom, back; each paired
/// with its complement.
pub(crate) struct Catalog {
    pub b1_expand: Rewrite,
    pub b1_collapse: Rewrite,
    pub b2_expand: Rewrite,
    pub b2_collapse: Rewrite,
    pub b3: Rewrite,
    /// `b3`'s `from` pattern mapped onto its `to` pattern by a cube
    /// symmetry; locates the inverse of a b3 flip.
    pub b3_swap: Vec<Dart>,
    pub b31: Rewrite,
    pub b31_swap: Vec<Dart>,
    pub slide_forward: Rewrite,
    pub slide_backward: Rewrite,
    pub rotation: Rewrite,
}

fn complementary(cube: &GMap, faces: &[usize]) -> (Rewrite, Rewrite, Vec<Dart>, Vec<Dart>) {
    let rest: Vec<usize> = (0..6).filter(|f| !faces.contains(f)).collect();
    let (p, p_host) = Pattern::from_faces(cube, faces);
    let (q, q_host) = Pattern::from_faces(cube, &rest);
    let bmap_for = |to: &Pattern, to_host: &[Dart], from_host: &[Dart]| -> Vec<Dart> {
        to.map()
            .darts()
            .map(|x| {
                if to.is_boundary(x) {
                    let h = cube.alpha(2, to_host[x as usize]);
                    from_host.binary_search(&h).unwrap() as Dart
                } else {
                    NONE
                }
            })
            .collect()
    };
    let fwd = Rewrite::new(p.clone(), q.clone(), bmap_for(&q, &q_host, &p_host));
    let back = Rewrite::new(q, p, bmap_for(&fwd.from, &p_host, &q_host));
    (fwd, back, p_host, q_host)
}

/// Cube faces: 0 x=0, 1 x=1, 2 y=0, 3 y=1, 4 z=0, 5 z=1.
fn build_catalog() -> Catalog {
    let cube = cube_sphere();
    let g = cube.gmap();
    let (b1_expand, b1_collapse, _, _) = complementary(g, &[4]);
    let (b2_expand, b2_collapse, _, _) = complementary(g, &[2, 4]);
    let (b3, _, p3_host, q3_host) = complementary(g, &[0, 2, 4]);

    let b3_swap = swap(g, &p3_host, &q3_host);
    let (b31, _, row_host, rest_host) = complementary(g, &[2, 3, 4]);
    let b31_swap = swap(g, &row_host, &rest_host);

    let hexagon = b2_expand.from.clone();
    let slide_forward = Rewrite::rotated(&hexagon, 1);
    let slide_backward = Rewrite::rotated(&hexagon, -1);
    let rotation = Rewrite::rotated(&degree_two_quadrilateral(), 1);
    Catalog {
        b1_expand,
        b1_collapse,
        b2_expand,
        b2_collapse,
        b3,
        b3_swap,
        b31,
        b31_swap,
        slide_forward,
        slide_backward,
        rotation,
    }
}

/// A cube symmetry carrying the patch on `p_host` onto its complement on
/// `q_host`, as a map between pattern darts; locates the inverse of a
/// self-complementary flip.
fn swap(g: &GMap, p_host: &[Dart], q_host: &[Dart]) -> Vec<Dart> {
    let (whole, _) = Pattern::from_faces(g, &[0, 1, 2, 3, 4, 5]);
    let mut m = Matcher::default();
    let mut sym = Vec::new();
    g.darts()
        .find_map(|c| {
            if !m.match_at(&whole, g, c, &mut sym) {
                return None;
            }
            p_host
                .iter()
                .map(|&h| q_host.binary_search(&sym[h as usize]).ok().map(|i| i as Dart))
                .collect::<Option<Vec<Dart>>>()
        })
        .expect("the split is self-complementary")
}

/// Two squares sharing the two edges at a degree-2 vertex; corners of
/// square 0 are (v, a, b, c), of square 1 (v, c, d, a).
fn degree_two_quadrilateral() -> Pattern {
    let mut b = QuadBuilder::new(2);
    b.glue(0, 0, 1, 3, true).glue(0, 3, 1, 0, true);
    Pattern::new(b.into_gmap())
}

pub(crate) fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn patch_shapes() {
        let c = catalog();
        let faces = |r: &Rewrite| (r.from.n_faces(), r.to.n_faces());
        assert_eq!(faces(&c.b1_expand), (1, 5));
        assert_eq!(faces(&c.b1_collapse), (5, 1));
        assert_eq!(faces(&c.b2_expand), (2, 4));
        assert_eq!(faces(&c.b3), (3, 3));
        assert_eq!(faces(&c.b31), (3, 3));
        // an octagon against the corner patch's hexagon
        assert_eq!(3 * c.b31.from.boundary_cycle().len(), 4 * c.b3.from.boundary_cycle().len());
        for r in [&c.b1_expand, &c.b2_expand, &c.b3, &c.b31, &c.rotation] {
            for pat in [&r.from, &r.to] {
                let v = pat.n_vertices() as i64;
                let e = pat.n_edges() as i64;
                assert_eq!(v - e + pat.n_faces() as i64, 1, "patch is a disk");
            }
            assert_eq!(r.from.boundary_cycle().len(), r.to.boundary_cycle().len());
        }
    }

    #[test]
    fn automorphism_orbits() {
        let c = catalog();
        assert_eq!(c.b1_expand.root_orbit.len(), 8);
        assert_eq!(c.b1_collapse.root_orbit.len(), 8);
        assert_eq!(c.b2_expand.root_orbit.len(), 4);
        assert_eq!(c.b3.root_orbit.len(), 6);
        assert_eq!(c.b31.root_orbit.len(), 4);
        assert_eq!(c.rotation.root_orbit.len(), 4);
    }

    #[test]
    fn interior_cells_of_patches() {
        let c = catalog();
        let interior_vertices = |p: &Pattern| {
            let mut on_boundary = vec![false; p.n_vertices()];
            for d in p.map().darts().filter(|&d| p.is_boundary(d)) {
                on_boundary[p.vertex(d)] = true;
            }
            on_boundary.iter().filter(|&&b| !b).count()
        };
        assert_eq!(interior_vertices(&c.b1_expand.to), 4);
        assert_eq!(interior_vertices(&c.b2_expand.to), 2);
        assert_eq!(interior_vertices(&c.b3.from), 1);
        assert_eq!(interior_vertices(&c.b3.to), 1);
        assert_eq!(interior_vertices(&c.b31.from), 0);
        assert_eq!(interior_vertices(&c.rotation.from), 1);
    }
}
