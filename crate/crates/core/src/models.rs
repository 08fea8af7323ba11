//! Catalogue of small named cubications.

use thiserror::Error;

use crate::gmap::{from_vertex_quads, QuadBuilder, QuadGMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown model `{0}`")]
    Unknown(String),
    #[error("model `{name}` expects {expected} positive parameter(s), got {got:?}")]
    Params { name: String, expected: usize, got: Vec<usize> },
}

/// How opposite sides of a grid are identified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wrap {
    /// Left free as boundary.
    Open,
    /// Identified by translation.
    Plain,
    /// Identified with a reflection.
    Flipped,
}

/// An `m x n` grid of squares, face `(i, j)` at index `j*m + i`, with the
/// given identifications in the x and y directions.
pub fn grid(m: usize, n: usize, wrap_x: Wrap, wrap_y: Wrap) -> QuadGMap {
    assert!(m > 0 && n > 0, "grid dimensions must be positive");
    let face = |i: usize, j: usize| j * m + i;
    let mut b = QuadBuilder::new(m * n);
    for j in 0..n {
        for i in 0..m {
            // side 1 is the right side, side 3 the left
            if i + 1 < m {
                b.glue(face(i, j), 1, face(i + 1, j), 3, true);
            } else {
                match wrap_x {
                    Wrap::Open => {}
                    Wrap::Plain => {
                        b.glue(face(i, j), 1, face(0, j), 3, true);
                    }
                    Wrap::Flipped => {
                        b.glue(face(i, j), 1, face(0, n - 1 - j), 3, false);
                    }
                }
            }
            // side 2 is the top, side 0 the bottom
            if j + 1 < n {
                b.glue(face(i, j), 2, face(i, j + 1), 0, true);
            } else {
                match wrap_y {
                    Wrap::Open => {}
                    Wrap::Plain => {
                        b.glue(face(i, j), 2, face(i, 0), 0, true);
                    }
                    Wrap::Flipped => {
                        b.glue(face(i, j), 2, face(m - 1 - i, 0), 0, false);
                    }
                }
            }
        }
    }
    b.build().expect("grid construction is valid")
}

/// Boundary of the unit cube: 8 vertices, 12 edges, 6 squares.
pub fn cube_sphere() -> QuadGMap {
    // vertex x + 2y + 4z
    from_vertex_quads(&[
        [0, 2, 6, 4],
        [1, 5, 7, 3],
        [0, 4, 5, 1],
        [2, 3, 7, 6],
        [0, 1, 3, 2],
        [4, 6, 7, 5],
    ])
    .expect("cube is valid")
}

/// Two squares glued along all four sides.
pub fn pillow_sphere() -> QuadGMap {
    let mut b = QuadBuilder::new(2);
    for s in 0..4 {
        b.glue(0, s, 1, s, false);
    }
    b.build().expect("pillow is valid")
}

/// One square whose adjacent sides are zipped in two pairs: the only
/// one-square sphere.
pub fn beak_sphere() -> QuadGMap {
    let mut b = QuadBuilder::new(1);
    b.glue(0, 0, 0, 1, true).glue(0, 2, 0, 3, true);
    b.build().expect("beak is valid")
}

pub fn grid_torus(m: usize, n: usize) -> QuadGMap {
    grid(m, n, Wrap::Plain, Wrap::Plain)
}

pub fn klein_grid(m: usize, n: usize) -> QuadGMap {
    grid(m, n, Wrap::Plain, Wrap::Flipped)
}

/// One square with antipodal side identifications.
pub fn rp2_min() -> QuadGMap {
    let mut b = QuadBuilder::new(1);
    b.glue(0, 0, 0, 2, false).glue(0, 1, 0, 3, false);
    b.build().expect("projective plane is valid")
}

pub fn disk_grid(m: usize, n: usize) -> QuadGMap {
    grid(m, n, Wrap::Open, Wrap::Open)
}

/// `m` rings of `n` squares.
pub fn annulus_grid(m: usize, n: usize) -> QuadGMap {
    grid(n, m, Wrap::Plain, Wrap::Open)
}

/// A strip of `n` squares closed up with a reflection.
pub fn moebius_strip(n: usize) -> QuadGMap {
    grid(n, 1, Wrap::Flipped, Wrap::Open)
}

pub const MODEL_NAMES: &[&str] = &[
    "cube_sphere",
    "pillow_sphere",
    "beak_sphere",
    "grid_torus",
    "klein_grid",
    "rp2_min",
    "disk_grid",
    "annulus_grid",
    "moebius_strip",
];

/// Looks a model up by name.
pub fn standard_model(name: &str, params: &[usize]) -> Result<QuadGMap, ModelError> {
    let want = |k: usize| -> Result<(), ModelError> {
        if params.len() == k && params.iter().all(|&p| p > 0) {
            Ok(())
        } else {
            Err(ModelError::Params { name: name.into(), expected: k, got: params.to_vec() })
        }
    };
    match name {
        "cube_sphere" => want(0).map(|_| cube_sphere()),
        "pillow_sphere" => want(0).map(|_| pillow_sphere()),
        "beak_sphere" => want(0).map(|_| beak_sphere()),
        "rp2_min" => want(0).map(|_| rp2_min()),
        "grid_torus" => want(2).map(|_| grid_torus(params[0], params[1])),
        "klein_grid" => want(2).map(|_| klein_grid(params[0], params[1])),
        "disk_grid" => want(2).map(|_| disk_grid(params[0], params[1])),
        "annulus_grid" => want(2).map(|_| annulus_grid(params[0], params[1])),
        "moebius_strip" => want(1).map(|_| moebius_strip(params[0])),
        other => Err(ModelError::Unknown(other.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{classify_surface, SurfaceClass};

    #[test]
    fn cell_counts_of_small_models() {
        assert_eq!(cube_sphere().cell_counts(), (8, 12, 6));
        assert_eq!(grid_torus(1, 1).cell_counts(), (1, 2, 1));
        assert_eq!(disk_grid(1, 1).cell_counts(), (4, 4, 1));
        assert_eq!(pillow_sphere().cell_counts(), (4, 4, 2));
        assert_eq!(beak_sphere().cell_counts(), (3, 2, 1));
        assert_eq!(rp2_min().cell_counts(), (2, 2, 1));
    }

    #[test]
    fn classification_matches_names() {
        let cases = [
            (cube_sphere(), SurfaceClass::sphere()),
            (pillow_sphere(), SurfaceClass::sphere()),
            (beak_sphere(), SurfaceClass::sphere()),
            (grid_torus(2, 3), SurfaceClass::torus()),
            (grid_torus(1, 1), SurfaceClass::torus()),
            (klein_grid(1, 1), SurfaceClass::klein_bottle()),
            (klein_grid(3, 2), SurfaceClass::klein_bottle()),
            (rp2_min(), SurfaceClass::projective_plane()),
            (disk_grid(2, 3), SurfaceClass::disk()),
            (annulus_grid(1, 3), SurfaceClass::annulus()),
            (moebius_strip(2), SurfaceClass::moebius_strip()),
            (moebius_strip(1), SurfaceClass::moebius_strip()),
        ];
        for (q, want) in cases {
            assert_eq!(classify_surface(&q).unwrap(), want);
        }
    }

    #[test]
    fn unknown_model_and_bad_params() {
        assert!(matches!(standard_model("dodecahedron", &[]), Err(ModelError::Unknown(_))));
        assert!(matches!(standard_model("grid_torus", &[1]), Err(ModelError::Params { .. })));
        assert!(matches!(standard_model("grid_torus", &[0, 2]), Err(ModelError::Params { .. })));
    }
}
