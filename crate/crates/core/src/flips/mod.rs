//! Cubical flips: replacing a patch of squares that matches one side of a
//! complementary split of the cube boundary by the other side.
//!
//! | kind | replaces | by | ΔF |
//! |------|----------|----|----|
//! | b1   | 1 square | 5  | +4 |
//! | b1c  | 5        | 1  | −4 |
//! | b2   | 2        | 4  | +2 |
//! | b2c  | 4        | 2  | −2 |
//! | b3   | 3        | 3  | 0  |
//! | b31  | 3        | 3  | 0  |
//!
//! b3 exchanges the three squares at a corner of the cube for the three at
//! the opposite corner; b31 exchanges a row of three squares for the
//! complementary row.
//!
//! Occurrences are dart-level morphisms and may identify cells on the patch
//! boundary ("immersed" sites). Only cells interior to the patch are
//! removed, so the boundary cubication of the surface is kept.

mod diagonal;
pub(crate) mod pattern;
mod stabilize;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::bits::{solve, BitVec};
use crate::gmap::{Dart, GMap, QuadGMap};
use crate::homology::{Chain, HomologyError, MarkedCubication};
use crate::surface::{boundary_signature, classify_surface};

pub use diagonal::{diagonal_rotation, diagonal_sites, diagonal_slide, DiagonalKind, DiagonalSite};
pub use pattern::Pattern;
pub use stabilize::{stabilize, stabilize_complex, DualPath};

use pattern::{catalog, substitute, Matcher, Rewrite, Substitution, NONE};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlipError {
    #[error("no {kind} site anchored at dart {anchor}")]
    InvalidSite { kind: String, anchor: Dart },
    #[error("path is not transverse: {0}")]
    NotTransverse(String),
    #[error("could not reroute reference cycle {0} inside the patch")]
    RerouteFailed(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<HomologyError> for FlipError {
    fn from(e: HomologyError) -> Self {
        FlipError::Internal(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FlipKind {
    B1Expand,
    B1Collapse,
    B2Expand,
    B2Collapse,
    B3,
    B31,
}

impl FlipKind {
    pub const ALL: [FlipKind; 6] = [
        FlipKind::B1Expand,
        FlipKind::B1Collapse,
        FlipKind::B2Expand,
        FlipKind::B2Collapse,
        FlipKind::B3,
        FlipKind::B31,
    ];

    pub fn code(self) -> &'static str {
        match self {
            FlipKind::B1Expand => "b1",
            FlipKind::B1Collapse => "b1c",
            FlipKind::B2Expand => "b2",
            FlipKind::B2Collapse => "b2c",
            FlipKind::B3 => "b3",
            FlipKind::B31 => "b31",
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            FlipKind::B1Expand => FlipKind::B1Collapse,
            FlipKind::B1Collapse => FlipKind::B1Expand,
            FlipKind::B2Expand => FlipKind::B2Collapse,
            FlipKind::B2Collapse => FlipKind::B2Expand,
            FlipKind::B3 => FlipKind::B3,
            FlipKind::B31 => FlipKind::B31,
        }
    }

    pub fn face_delta(self) -> i64 {
        match self {
            FlipKind::B1Expand => 4,
            FlipKind::B1Collapse => -4,
            FlipKind::B2Expand => 2,
            FlipKind::B2Collapse => -2,
            FlipKind::B3 | FlipKind::B31 => 0,
        }
    }

    pub(crate) fn rewrite(self) -> &'static Rewrite {
        let c = catalog();
        match self {
            FlipKind::B1Expand => &c.b1_expand,
            FlipKind::B1Collapse => &c.b1_collapse,
            FlipKind::B2Expand => &c.b2_expand,
            FlipKind::B2Collapse => &c.b2_collapse,
            FlipKind::B3 => &c.b3,
            FlipKind::B31 => &c.b31,
        }
    }
}

impl fmt::Display for FlipKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for FlipKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FlipKind::ALL
            .into_iter()
            .find(|k| k.code() == s)
            .ok_or_else(|| format!("unknown flip kind `{s}` (expected b1, b1c, b2, b2c, b3 or b31)"))
    }
}

/// Whether a site is injective on the cells of the complex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Occurrence {
    Embedded,
    Immersed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlipSite {
    pub kind: FlipKind,
    /// Smallest image of the pattern root over the pattern's symmetries;
    /// determines the site.
    pub anchor: Dart,
    /// Image of every pattern dart, for the representative rooted at the
    /// anchor.
    pub image: Vec<Dart>,
    pub occurrence: Occurrence,
}

impl fmt::Display for FlipSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let occ = match self.occurrence {
            Occurrence::Embedded => "embedded",
            Occurrence::Immersed => "immersed",
        };
        write!(f, "{} {} {}", self.kind, self.anchor, occ)
    }
}

fn occurrence(g: &GMap, pat: &Pattern, image: &[Dart]) -> Occurrence {
    let vertices = g.orbits(&[1, 2]);
    let edges = g.orbits(&[0, 2]);
    let injective = |local: &dyn Fn(Dart) -> usize, n_local: usize, ids: &[u32]| {
        let mut seen = vec![u32::MAX; n_local];
        let mut hit = std::collections::HashMap::new();
        for p in pat.map().darts() {
            let l = local(p);
            let c = ids[image[p as usize] as usize];
            if seen[l] == u32::MAX {
                seen[l] = c;
                if hit.insert(c, l).is_some() {
                    return false;
                }
            }
        }
        true
    };
    if injective(&|p| pat.vertex(p), pat.n_vertices(), &vertices.id)
        && injective(&|p| pat.edge(p), pat.n_edges(), &edges.id)
    {
        Occurrence::Embedded
    } else {
        Occurrence::Immersed
    }
}

/// All sites of a rewrite, one per symmetry class of matches, by anchor.
/// Returns (anchor, image, substitution) for every site whose
/// substitution validates.
pub(crate) fn rewrite_sites(
    q: &QuadGMap,
    rw: &Rewrite,
) -> Vec<(Dart, Vec<Dart>, Substitution)> {
    let g = q.gmap();
    let n = g.n_darts();
    let mut covered = vec![false; n];
    let mut m = Matcher::default();
    let mut image = Vec::new();
    let mut out = Vec::new();
    for c in g.darts() {
        if covered[c as usize] || !m.match_at(&rw.from, g, c, &mut image) {
            continue;
        }
        for &r in &rw.root_orbit {
            covered[image[r as usize] as usize] = true;
        }
        if let Ok(sub) = substitute(g, rw, &image) {
            out.push((c, image.clone(), sub));
        }
    }
    out
}

/// Sites of `kind` on `q`, in increasing anchor order. Sites are distinct
/// up to the symmetries of the pattern.
pub fn flip_sites(q: &QuadGMap, kind: FlipKind) -> Vec<FlipSite> {
    let rw = kind.rewrite();
    rewrite_sites(q, rw)
        .into_iter()
        .map(|(anchor, image, _)| FlipSite {
            kind,
            anchor,
            occurrence: occurrence(q.gmap(), &rw.from, &image),
            image,
        })
        .collect()
}

/// The site of `kind` anchored at `anchor`, if there is one.
pub fn site_at(q: &QuadGMap, kind: FlipKind, anchor: Dart) -> Result<FlipSite, FlipError> {
    let invalid = || FlipError::InvalidSite { kind: kind.code().into(), anchor };
    let (image, _) = locate(q, kind.rewrite(), anchor).ok_or_else(invalid)?;
    Ok(FlipSite {
        kind,
        anchor,
        occurrence: occurrence(q.gmap(), &kind.rewrite().from, &image),
        image,
    })
}

/// Match rooted at `anchor`, provided `anchor` is the canonical root of its
/// site and the substitution validates.
pub(crate) fn locate(q: &QuadGMap, rw: &Rewrite, anchor: Dart) -> Option<(Vec<Dart>, Substitution)> {
    let g = q.gmap();
    if anchor as usize >= g.n_darts() {
        return None;
    }
    let mut m = Matcher::default();
    let mut image = Vec::new();
    if !m.match_at(&rw.from, g, anchor, &mut image) {
        return None;
    }
    if rw.root_orbit.iter().any(|&r| image[r as usize] < anchor) {
        return None;
    }
    let sub = substitute(g, rw, &image).ok()?;
    Some((image, sub))
}

pub(crate) fn check_site(q: &QuadGMap, site: &FlipSite) -> Result<Substitution, FlipError> {
    let invalid = || FlipError::InvalidSite { kind: site.kind.code().into(), anchor: site.anchor };
    match locate(q, site.kind.rewrite(), site.anchor) {
        Some((image, sub)) if image == site.image => Ok(sub),
        _ => Err(invalid()),
    }
}

fn check_preserved(before: &QuadGMap, after: &QuadGMap) -> Result<(), FlipError> {
    let cb = classify_surface(before).map_err(|e| FlipError::Internal(e.to_string()))?;
    let ca = classify_surface(after).map_err(|e| FlipError::Internal(e.to_string()))?;
    if cb != ca {
        return Err(FlipError::Internal(format!("surface changed from {cb} to {ca}")));
    }
    if boundary_signature(before) != boundary_signature(after) {
        return Err(FlipError::Internal("boundary signature changed".into()));
    }
    Ok(())
}

/// Applies a flip to an unmarked complex.
pub fn apply_flip_unmarked(q: &QuadGMap, site: &FlipSite) -> Result<QuadGMap, FlipError> {
    let sub = check_site(q, site)?;
    check_preserved(q, &sub.result)?;
    Ok(sub.result)
}

/// Applies a flip, carrying the reference cycles across: the part of each
/// cycle inside the patch is replaced by a path through the new patch with
/// the same ends.
pub fn apply_flip(m: &MarkedCubication, site: &FlipSite) -> Result<MarkedCubication, FlipError> {
    let q = m.complex();
    let sub = check_site(q, site)?;
    check_preserved(q, &sub.result)?;
    let cycles = reroute_through_patch(q, site.kind.rewrite(), &site.image, &sub, m.reference_cycles())?;
    Ok(MarkedCubication::new(sub.result, cycles)?)
}

/// The site of the inverse flip that undoes `site`, located on the result
/// of applying it.
pub fn inverse_site(q: &QuadGMap, site: &FlipSite) -> Result<(QuadGMap, FlipSite), FlipError> {
    let sub = check_site(q, site)?;
    let inv = site.kind.inverse();
    let base = sub.patch_base;
    let image: Vec<Dart> = match site.kind {
        FlipKind::B3 => catalog().b3_swap.iter().map(|&x| base + x).collect(),
        FlipKind::B31 => catalog().b31_swap.iter().map(|&x| base + x).collect(),
        _ => (0..site.kind.rewrite().to.n_darts() as Dart).map(|x| base + x).collect(),
    };
    let rw = inv.rewrite();
    // move to the canonical root of the inverse site
    let anchor = rw.root_orbit.iter().map(|&r| image[r as usize]).min().unwrap();
    let found = site_at(&sub.result, inv, anchor)?;
    Ok((sub.result, found))
}

/// Transports edge chains of the old complex through a substitution and
/// fixes them up inside the new patch.
pub(crate) fn reroute_through_patch(
    old: &QuadGMap,
    rw: &Rewrite,
    image: &[Dart],
    sub: &Substitution,
    cycles: &[Chain],
) -> Result<Vec<Chain>, FlipError> {
    if cycles.is_empty() {
        return Ok(Vec::new());
    }
    let g = old.gmap();
    let ng = sub.result.gmap();
    let old_edges = g.orbits(&[0, 2]);
    let new_edges = ng.orbits(&[0, 2]);
    let mut pre = vec![NONE; g.n_darts()];
    for (p, &c) in image.iter().enumerate() {
        pre[c as usize] = p as Dart;
    }
    let reps = old_edges.representatives();
    // where each old edge goes: Some(new edge) or None if inside the patch
    let edge_target: Vec<Option<usize>> = reps
        .iter()
        .map(|&d| {
            let orbit = g.orbit(d, &[0, 2]);
            if let Some(&x) = orbit.iter().find(|&&x| sub.new_index[x as usize] != NONE) {
                return Some(new_edges.id[sub.new_index[x as usize] as usize] as usize);
            }
            orbit.iter().find_map(|&x| {
                let p = pre[x as usize];
                rw.from.is_boundary(p).then(|| {
                    let nq = sub.patch_base + rw.bmap_inv[p as usize];
                    new_edges.id[nq as usize] as usize
                })
            })
        })
        .collect();
    // local edge of `from` for every removed old edge
    let mut local_of_old = vec![usize::MAX; old_edges.count];
    for p in rw.from.map().darts() {
        let e = old_edges.id[image[p as usize] as usize] as usize;
        if edge_target[e].is_none() {
            local_of_old[e] = rw.from.edge(p);
        }
    }

    let from_ends = rw.from.edge_endpoints();
    let to_ends = rw.to.edge_endpoints();
    // columns: boundary of every edge of the new patch, on `to` vertices;
    // edges on ∂Σ are only used when the interior ones cannot close a cycle
    let mut to_edge_rep = vec![NONE; rw.to.n_edges()];
    for x in rw.to.map().darts() {
        if to_edge_rep[rw.to.edge(x)] == NONE {
            to_edge_rep[rw.to.edge(x)] = x;
        }
    }
    let column = |e: usize| {
        let (u, w) = to_ends[e];
        BitVec::from_indices(rw.to.n_vertices(), if u == w { vec![] } else { vec![u, w] })
    };
    let on_boundary = |e: usize| {
        let nx = sub.patch_base + to_edge_rep[e];
        ng.is_boundary_dart(nx) || ng.is_boundary_dart(ng.alpha(0, nx))
    };
    let interior: Vec<usize> = (0..to_edge_rep.len()).filter(|&e| !on_boundary(e)).collect();
    let interior_columns: Vec<BitVec> = interior.iter().map(|&e| column(e)).collect();
    let all: Vec<usize> = (0..to_edge_rep.len()).collect();
    let all_columns: Vec<BitVec> = all.iter().map(|&e| column(e)).collect();
    let mut to_vertex_of_from = vec![usize::MAX; rw.from.n_vertices()];
    for (v, c) in rw.vertex_corr.iter().enumerate() {
        if let Some(c) = c {
            to_vertex_of_from[*c] = v;
        }
    }

    let mut out = Vec::with_capacity(cycles.len());
    for (k, rho) in cycles.iter().enumerate() {
        let mut chain = Chain::zero(1, new_edges.count);
        let mut from_defect = BitVec::zeros(rw.from.n_vertices());
        for e in rho.cells() {
            match edge_target[e] {
                Some(t) => chain.bits.flip(t),
                None => {
                    let (u, w) = from_ends[local_of_old[e]];
                    if u != w {
                        from_defect.flip(u);
                        from_defect.flip(w);
                    }
                }
            }
        }
        let mut defect = BitVec::zeros(rw.to.n_vertices());
        for v in from_defect.ones() {
            match to_vertex_of_from[v] {
                usize::MAX => {
                    return Err(FlipError::Internal("reference cycle ends inside the patch".into()))
                }
                t => defect.flip(t),
            }
        }
        let (usable, x) = match solve(&interior_columns, &defect) {
            Some(x) => (&interior, x),
            None => (&all, solve(&all_columns, &defect).ok_or(FlipError::RerouteFailed(k))?),
        };
        for i in x.ones() {
            let nq = sub.patch_base + to_edge_rep[usable[i]];
            chain.bits.flip(new_edges.id[nq as usize] as usize);
        }
        out.push(chain);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_isomorphic;
    use crate::homology::j_invariant;
    use crate::models::*;

    fn counts(q: &QuadGMap, kind: FlipKind) -> usize {
        flip_sites(q, kind).len()
    }

    #[test]
    fn site_counts() {
        assert_eq!(counts(&cube_sphere(), FlipKind::B1Expand), 6);
        assert_eq!(counts(&grid_torus(1, 1), FlipKind::B1Expand), 1);
        assert_eq!(counts(&cube_sphere(), FlipKind::B2Expand), 12);
        assert_eq!(counts(&cube_sphere(), FlipKind::B3), 8);
        // a middle square and a direction for each row
        assert_eq!(counts(&cube_sphere(), FlipKind::B31), 12);
        assert_eq!(counts(&cube_sphere(), FlipKind::B1Collapse), 6);
        assert_eq!(counts(&cube_sphere(), FlipKind::B2Collapse), 12);
    }

    #[test]
    fn immersed_flag() {
        let s = flip_sites(&grid_torus(1, 1), FlipKind::B1Expand);
        assert_eq!(s[0].occurrence, Occurrence::Immersed);
        let s = flip_sites(&cube_sphere(), FlipKind::B1Expand);
        assert!(s.iter().all(|x| x.occurrence == Occurrence::Embedded));
    }

    #[test]
    fn expand_on_cube() {
        let m = MarkedCubication::auto(cube_sphere()).unwrap();
        let site = &flip_sites(m.complex(), FlipKind::B1Expand)[0];
        let out = apply_flip(&m, site).unwrap();
        assert_eq!(out.complex().n_faces(), 10);
        assert_eq!(classify_surface(out.complex()).unwrap().name(), "sphere");
        assert!(!j_invariant(&out).unwrap().j2);
    }

    #[test]
    fn expand_then_collapse_is_identity() {
        for q in [cube_sphere(), grid_torus(1, 1), grid_torus(2, 2), disk_grid(1, 1), moebius_strip(2)] {
            for kind in FlipKind::ALL {
                for site in flip_sites(&q, kind) {
                    let (after, inv) = inverse_site(&q, &site).unwrap();
                    assert_eq!(
                        after.n_faces() as i64,
                        q.n_faces() as i64 + kind.face_delta()
                    );
                    let back = apply_flip_unmarked(&after, &inv).unwrap();
                    assert!(is_isomorphic(&back, &q).unwrap(), "{kind} at {}", site.anchor);
                }
            }
        }
    }

    #[test]
    fn invariants_survive_every_site() {
        for q in [grid_torus(1, 1), grid_torus(2, 2), grid_torus(1, 2), klein_grid(1, 2), rp2_min(), annulus_grid(2, 3), moebius_strip(3)] {
            let m = MarkedCubication::auto(q).unwrap();
            let j = j_invariant(&m).unwrap();
            for kind in FlipKind::ALL {
                for site in flip_sites(m.complex(), kind) {
                    let out = apply_flip(&m, &site).unwrap();
                    assert_eq!(j_invariant(&out).unwrap(), j, "{kind} at {}", site.anchor);
                }
            }
        }
    }

    #[test]
    fn b3_needs_a_degree_three_vertex() {
        assert!(flip_sites(&grid_torus(2, 2), FlipKind::B3).is_empty());
        let m = MarkedCubication::auto(grid_torus(2, 2)).unwrap();
        let j = j_invariant(&m).unwrap();
        let site = &flip_sites(m.complex(), FlipKind::B2Expand)[0];
        let m = apply_flip(&m, site).unwrap();
        let sites = flip_sites(m.complex(), FlipKind::B3);
        assert!(!sites.is_empty());
        for s in &sites {
            let out = apply_flip(&m, s).unwrap();
            assert_eq!(out.complex().n_faces(), 6);
            assert_eq!(j_invariant(&out).unwrap(), j);
        }
    }

    #[test]
    fn stale_site_rejected() {
        let q = cube_sphere();
        let mut site = flip_sites(&q, FlipKind::B2Expand)[0].clone();
        site.anchor += 1;
        assert!(apply_flip_unmarked(&q, &site).is_err());
        assert!(site_at(&q, FlipKind::B1Expand, 9999).is_err());
    }

    #[test]
    fn kinds_parse() {
        for k in FlipKind::ALL {
            assert_eq!(k.code().parse::<FlipKind>().unwrap(), k);
            assert_eq!(k.inverse().inverse(), k);
            assert_eq!(k.face_delta(), -k.inverse().face_delta());
        }
        assert!("b4".parse::<FlipKind>().is_err());
    }
}
