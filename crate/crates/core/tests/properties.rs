use std::sync::OnceLock;

use proptest::prelude::*;
use proptest::sample::Index;

use quadflip::curves::extract_curves;
use quadflip::flips::{apply_flip, apply_flip_unmarked, flip_sites, inverse_site, FlipKind};
use quadflip::homology::{j_invariant, MarkedCubication};
use quadflip::models::{annulus_grid, moebius_strip};
use quadflip::qgm::{parse_qgm, write_qgm};
use quadflip::search::enumerate_cubications;
use quadflip::subdivide::subdivide;
use quadflip::{
    boundary_signature, canonical_code, classify_surface, is_isomorphic, BoundarySignature, Dart, QuadGMap,
    SurfaceClass,
};

/// Small classes of several surfaces, at most 24 darts each.
fn small() -> &'static [QuadGMap] {
    static SMALL: OnceLock<Vec<QuadGMap>> = OnceLock::new();
    SMALL.get_or_init(|| {
        let mut v = Vec::new();
        for s in [SurfaceClass::sphere(), SurfaceClass::torus(), SurfaceClass::projective_plane(), SurfaceClass::klein_bottle()] {
            v.extend(enumerate_cubications(&s, 3, None));
        }
        v.extend(enumerate_cubications(&SurfaceClass::disk(), 3, Some(&BoundarySignature::parse("4").unwrap())));
        v
    })
}

fn medium() -> &'static [QuadGMap] {
    static MEDIUM: OnceLock<Vec<QuadGMap>> = OnceLock::new();
    MEDIUM.get_or_init(|| {
        let mut v = Vec::new();
        for s in [SurfaceClass::sphere(), SurfaceClass::torus(), SurfaceClass::klein_bottle()] {
            v.extend(enumerate_cubications(&s, 5, None));
        }
        v.extend(enumerate_cubications(&SurfaceClass::disk(), 4, Some(&BoundarySignature::parse("4").unwrap())));
        // three rings: a b31 across them leaves no interior loop around the core
        v.extend([annulus_grid(3, 1), annulus_grid(3, 2), annulus_grid(2, 3), moebius_strip(3)]);
        v
    })
}

/// Isomorphism by trying every image of dart 0 and propagating along the
/// involutions; shares nothing with the canonical code.
fn brute_isomorphic(a: &QuadGMap, b: &QuadGMap) -> bool {
    let n = a.n_darts();
    if n != b.n_darts() {
        return false;
    }
    'start: for t in 0..n as Dart {
        let mut map = vec![Dart::MAX; n];
        let mut used = vec![false; n];
        map[0] = t;
        used[t as usize] = true;
        let mut stack = vec![0 as Dart];
        while let Some(d) = stack.pop() {
            for i in 0..3 {
                let (x, y) = (a.alpha(i, d), b.alpha(i, map[d as usize]));
                if map[x as usize] == Dart::MAX {
                    if used[y as usize] {
                        continue 'start;
                    }
                    map[x as usize] = y;
                    used[y as usize] = true;
                    stack.push(x);
                } else if map[x as usize] != y {
                    continue 'start;
                }
            }
        }
        if map.iter().all(|&d| d != Dart::MAX) {
            return true;
        }
    }
    false
}

fn shuffled(q: &QuadGMap, seed: &[usize]) -> QuadGMap {
    // a permutation from a list of swap choices
    let n = q.n_darts();
    let mut perm: Vec<Dart> = (0..n as Dart).collect();
    for (i, &s) in seed.iter().enumerate().take(n) {
        perm.swap(i, i + s % (n - i));
    }
    q.relabel(&perm)
}

fn seed() -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(any::<usize>(), 48)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn code_ignores_labels(i in any::<Index>(), s in seed()) {
        let q = i.get(medium());
        let r = shuffled(q, &s);
        prop_assert!(QuadGMap::validate(r.gmap()).is_ok());
        prop_assert_eq!(canonical_code(q).unwrap(), canonical_code(&r).unwrap());
    }

    #[test]
    fn code_agrees_with_brute_force(i in any::<Index>(), j in any::<Index>(), s in seed(), t in seed()) {
        let (a, b) = (shuffled(i.get(small()), &s), shuffled(j.get(small()), &t));
        let same = canonical_code(&a).unwrap() == canonical_code(&b).unwrap();
        prop_assert_eq!(same, brute_isomorphic(&a, &b));
        prop_assert_eq!(same, is_isomorphic(&a, &b).unwrap());
        prop_assert_eq!(same, i.index(small().len()) == j.index(small().len()));
    }

    #[test]
    fn format_round_trip(i in any::<Index>(), s in seed()) {
        let q = shuffled(i.get(medium()), &s);
        let back = parse_qgm(&write_qgm(&q)).unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn subdivision_counts(i in any::<Index>()) {
        let q = i.get(medium());
        let (v, e, f) = q.cell_counts();
        let s = subdivide(q);
        prop_assert_eq!(s.n_faces(), 4 * f);
        prop_assert_eq!(s.spokes().count(), 4 * f);
        prop_assert_eq!(s.half_edges().count(), 2 * e);
        let chi = s.n_vertices() as i64 - s.n_edges() as i64 + s.n_faces() as i64;
        prop_assert_eq!(chi, v as i64 - e as i64 + f as i64);
    }

    #[test]
    fn euler_matches_class(i in any::<Index>()) {
        let q = i.get(medium());
        let c = classify_surface(q).unwrap();
        let chi = 2 - c.euler_genus() as i64 - c.boundary_count as i64;
        prop_assert_eq!(q.euler_characteristic(), chi);
        prop_assert_eq!(c.euler, chi);
        prop_assert_eq!(extract_curves(q).unwrap().double_point_count, q.n_faces());
    }

    /// A random walk of flips keeps the invariant, and every step can be
    /// undone.
    #[test]
    fn random_walk_keeps_j(i in any::<Index>(), steps in proptest::collection::vec((0usize..6, any::<Index>()), 1..6)) {
        let q = i.get(medium()).clone();
        let class = classify_surface(&q).unwrap();
        let sig = boundary_signature(&q);
        let mut m = MarkedCubication::auto(q).unwrap();
        let j0 = j_invariant(&m).unwrap();
        for (k, pick) in steps {
            let kind = FlipKind::ALL[k];
            let sites = flip_sites(m.complex(), kind);
            if sites.is_empty() {
                continue;
            }
            let site = pick.get(&sites);
            let next = apply_flip(&m, site).unwrap();
            let (after, inv) = inverse_site(m.complex(), site).unwrap();
            prop_assert!(is_isomorphic(&after, next.complex()).unwrap());
            prop_assert_eq!(inv.kind, kind.inverse());
            let back = apply_flip_unmarked(&after, &inv).unwrap();
            prop_assert!(is_isomorphic(&back, m.complex()).unwrap());
            m = next;
            prop_assert!(QuadGMap::validate(m.complex().gmap()).is_ok());
            prop_assert_eq!(classify_surface(m.complex()).unwrap(), class);
            prop_assert_eq!(boundary_signature(m.complex()), sig.clone());
            prop_assert_eq!(j_invariant(&m).unwrap(), j0.clone());
        }
    }
}
