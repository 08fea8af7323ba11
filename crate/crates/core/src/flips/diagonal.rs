//! Diagonal slide and diagonal rotation, implemented as re-gluing a matched
//! patch with its boundary correspondence turned.
//!
//! Slide: two squares sharing an edge form a hexagon whose middle edge is a
//! diameter; turning the hexagon by one side moves the middle edge to the
//! next diameter. Rotation: two squares sharing both edges at a degree-2
//! vertex form a quadrilateral; turning it by one side moves the vertex's
//! neighbours to the other two corners.

use std::fmt;

use crate::gmap::{Dart, QuadGMap};

use super::pattern::{catalog, Rewrite};
use super::{check_preserved, locate, rewrite_sites, FlipError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiagonalKind {
    SlideForward,
    SlideBackward,
    Rotation,
}

impl DiagonalKind {
    pub(crate) fn rewrite(self) -> &'static Rewrite {
        let c = catalog();
        match self {
            DiagonalKind::SlideForward => &c.slide_forward,
            DiagonalKind::SlideBackward => &c.slide_backward,
            DiagonalKind::Rotation => &c.rotation,
        }
    }
}

impl fmt::Display for DiagonalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagonalKind::SlideForward => "slide+",
            DiagonalKind::SlideBackward => "slide-",
            DiagonalKind::Rotation => "rotate",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalSite {
    pub kind: DiagonalKind,
    pub anchor: Dart,
    pub image: Vec<Dart>,
}

pub fn diagonal_sites(q: &QuadGMap, kind: DiagonalKind) -> Vec<DiagonalSite> {
    rewrite_sites(q, kind.rewrite())
        .into_iter()
        .map(|(anchor, image, _)| DiagonalSite { kind, anchor, image })
        .collect()
}

fn apply(q: &QuadGMap, site: &DiagonalSite) -> Result<QuadGMap, FlipError> {
    let invalid = || FlipError::InvalidSite { kind: site.kind.to_string(), anchor: site.anchor };
    let sub = match locate(q, site.kind.rewrite(), site.anchor) {
        Some((image, sub)) if image == site.image => sub,
        _ => return Err(invalid()),
    };
    check_preserved(q, &sub.result)?;
    if sub.result.cell_counts() != q.cell_counts() {
        return Err(FlipError::Internal("diagonal move changed the cell counts".into()));
    }
    Ok(sub.result)
}

pub fn diagonal_slide(q: &QuadGMap, site: &DiagonalSite) -> Result<QuadGMap, FlipError> {
    if site.kind == DiagonalKind::Rotation {
        return Err(FlipError::InvalidSite { kind: "slide".into(), anchor: site.anchor });
    }
    apply(q, site)
}

pub fn diagonal_rotation(q: &QuadGMap, site: &DiagonalSite) -> Result<QuadGMap, FlipError> {
    if site.kind != DiagonalKind::Rotation {
        return Err(FlipError::InvalidSite { kind: "rotate".into(), anchor: site.anchor });
    }
    apply(q, site)
}
