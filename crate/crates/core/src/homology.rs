//! Mod-2 homology and the flip invariant.
//!
//! `j2` is the parity of the number of squares (one double point per square).
//! `j1` is the class of the section-arc system in `H1(Σ, ∂Σ; Z/2)`, computed on
//! the subdivided complex where the arcs are the spokes. Against a marking,
//! given as reference cycles in the 1-skeleton, `j1` pairs to `|ρ| mod 2`:
//! the arcs cross every interior edge exactly once, and a boundary edge,
//! once the cycle is pushed off `∂Σ`, is crossed by the one arc ending on it.

use std::fmt;

use thiserror::Error;

use crate::bits::{BitVec, EchelonBasis};
use crate::curves::extract_curves;
use crate::gmap::{Dart, QuadGMap};
use crate::subdivide::{subdivide, EdgeOrigin, SubdividedComplex, VertexOrigin};
use crate::surface::{boundary_signature, classify_surface, BoundarySignature, TopologyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("reference cycle {0} is not a mod-2 cycle")]
    NotACycle(usize),
    #[error("reference cycles are dependent in homology")]
    Dependent,
    #[error("more reference cycles ({given}) than the first Betti number ({dim})")]
    TooMany { given: usize, dim: usize },
    #[error("reference cycle {index} has length {len}, expected {expected} edges")]
    WrongLength { index: usize, len: usize, expected: usize },
    #[error("dart {0} out of range in marking")]
    BadDart(Dart),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// A mod-2 chain on the cells of one dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    pub degree: u8,
    pub bits: BitVec,
}

impl Chain {
    pub fn zero(degree: u8, len: usize) -> Self {
        Self { degree, bits: BitVec::zeros(len) }
    }

    pub fn from_cells(degree: u8, len: usize, cells: impl IntoIterator<Item = usize>) -> Self {
        Self { degree, bits: BitVec::from_indices(len, cells) }
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_zero()
    }

    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn size(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn add(&mut self, other: &Chain) {
        assert_eq!(self.degree, other.degree, "adding chains of different degree");
        self.bits.xor_assign(&other.bits);
    }
}

/// Cell incidences of a complex, mod 2.
#[derive(Clone, Debug)]
pub(crate) struct Incidence {
    pub n_vertices: usize,
    pub n_edges: usize,
    /// endpoints per edge
    pub endpoints: Vec<(usize, usize)>,
    /// edges per face, with multiplicity
    pub face_edges: Vec<Vec<usize>>,
    pub vertex_on_boundary: Vec<bool>,
    pub edge_on_boundary: Vec<bool>,
}

impl Incidence {
    pub fn of(q: &QuadGMap) -> Self {
        let g = q.gmap();
        let cells = g.cells();
        let endpoints = cells
            .edges
            .representatives()
            .into_iter()
            .map(|d| {
                let v = &cells.vertices.id;
                (v[d as usize] as usize, v[g.alpha(0, d) as usize] as usize)
            })
            .collect();
        let mut face_edges = vec![Vec::new(); cells.faces.count];
        for d in g.darts() {
            if d < g.alpha(0, d) {
                face_edges[cells.faces.id[d as usize] as usize]
                    .push(cells.edges.id[d as usize] as usize);
            }
        }
        let mut vertex_on_boundary = vec![false; cells.vertices.count];
        let mut edge_on_boundary = vec![false; cells.edges.count];
        for d in g.darts().filter(|&d| g.is_boundary_dart(d)) {
            vertex_on_boundary[cells.vertices.id[d as usize] as usize] = true;
            edge_on_boundary[cells.edges.id[d as usize] as usize] = true;
        }
        Self {
            n_vertices: cells.vertices.count,
            n_edges: cells.edges.count,
            endpoints,
            face_edges,
            vertex_on_boundary,
            edge_on_boundary,
        }
    }

    fn of_subdivision(s: &SubdividedComplex) -> Self {
        Self {
            n_vertices: s.n_vertices(),
            n_edges: s.n_edges(),
            endpoints: s.edge_endpoints(),
            face_edges: s.face_edges(),
            vertex_on_boundary: s.vertex_on_boundary.clone(),
            edge_on_boundary: s.edge_on_boundary.clone(),
        }
    }

    /// Boundary of an edge chain, on all vertices.
    pub fn boundary1(&self, edges: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.n_vertices);
        for e in edges.ones() {
            let (u, w) = self.endpoints[e];
            if u != w {
                out.flip(u);
                out.flip(w);
            }
        }
        out
    }

    pub fn face_boundary(&self, f: usize) -> BitVec {
        let mut out = BitVec::zeros(self.n_edges);
        for &e in &self.face_edges[f] {
            out.flip(e);
        }
        out
    }

    pub fn edge_vertices_vec(&self, e: usize) -> BitVec {
        self.boundary1(&BitVec::from_indices(self.n_edges, [e]))
    }

    fn drop_boundary_edges(&self, mut v: BitVec) -> BitVec {
        for (e, &b) in self.edge_on_boundary.iter().enumerate() {
            if b && v.get(e) {
                v.flip(e);
            }
        }
        v
    }

    fn drop_boundary_vertices(&self, mut v: BitVec) -> BitVec {
        for (x, &b) in self.vertex_on_boundary.iter().enumerate() {
            if b && v.get(x) {
                v.flip(x);
            }
        }
        v
    }
}

/// `H1(Σ, ∂Σ; Z/2)` of a subdivided complex. Relative chains are chains on
/// the cells not lying on the boundary.
#[derive(Clone, Debug)]
pub struct RelH1 {
    pub dimension: usize,
    /// Relative 1-cycles (on subdivision edges) representing a basis.
    pub basis: Vec<Chain>,
    n_boundaries: usize,
    span: EchelonBasis,
    incidence: Incidence,
}

impl RelH1 {
    pub fn n_edges(&self) -> usize {
        self.incidence.n_edges
    }

    /// Relative boundary of an edge chain: its boundary with the vertices on
    /// `∂Σ` discarded.
    pub fn relative_boundary(&self, chain: &Chain) -> Chain {
        let b = self.incidence.boundary1(&chain.bits);
        Chain { degree: 0, bits: self.incidence.drop_boundary_vertices(b) }
    }

    /// Coordinates of a relative cycle in [`basis`](Self::basis); `None` if
    /// the chain is not a relative cycle.
    pub fn coordinates(&self, chain: &Chain) -> Option<BitVec> {
        if !self.relative_boundary(chain).is_zero() {
            return None;
        }
        let v = self.incidence.drop_boundary_edges(chain.bits.clone());
        let combo = self.span.express(&v)?;
        let mut out = BitVec::zeros(self.dimension);
        for t in combo.ones().filter(|&t| t >= self.n_boundaries) {
            out.flip(t - self.n_boundaries);
        }
        Some(out)
    }

    /// Whether a relative cycle bounds, i.e. is zero in relative homology.
    pub fn is_null(&self, chain: &Chain) -> bool {
        self.coordinates(chain).is_some_and(|c| c.is_zero())
    }
}

fn relative_h1(inc: Incidence) -> RelH1 {
    let interior_edges: Vec<usize> =
        (0..inc.n_edges).filter(|&e| !inc.edge_on_boundary[e]).collect();
    // relative cycles: kernel of the boundary map on interior edges
    let mut kernel_finder = EchelonBasis::new(inc.n_vertices, interior_edges.len().max(1));
    let mut cycles = Vec::new();
    for (k, &e) in interior_edges.iter().enumerate() {
        let col = inc.drop_boundary_vertices(inc.edge_vertices_vec(e));
        if let Some(rel) = kernel_finder.insert_or_relation(k, &col) {
            cycles.push(BitVec::from_indices(inc.n_edges, rel.ones().map(|t| interior_edges[t])));
        }
    }
    let n_faces = inc.face_edges.len();
    let mut span = EchelonBasis::new(inc.n_edges, n_faces + cycles.len());
    for f in 0..n_faces {
        let b = inc.drop_boundary_edges(inc.face_boundary(f));
        span.insert(f, &b);
    }
    let mut basis = Vec::new();
    for z in cycles {
        if span.insert(n_faces + basis.len(), &z) {
            basis.push(Chain { degree: 1, bits: z });
        }
    }
    RelH1 { dimension: basis.len(), basis, n_boundaries: n_faces, span, incidence: inc }
}

pub fn h1_rel(s: &SubdividedComplex) -> RelH1 {
    relative_h1(Incidence::of_subdivision(s))
}

/// `dim H1(Σ, ∂Σ; Z/2)` from the Euler characteristic (equal to
/// `dim H1(Σ; Z/2)` by duality).
pub fn h1_dimension_formula(euler: i64, boundary_count: usize) -> usize {
    if boundary_count == 0 {
        (2 - euler) as usize
    } else {
        (1 - euler) as usize
    }
}

/// The chain of all spokes: the section arcs as a 1-chain.
pub fn midcurve_chain(s: &SubdividedComplex) -> Chain {
    Chain::from_cells(1, s.n_edges(), s.spokes())
}

/// Absolute boundary of an edge chain of a subdivision.
pub fn absolute_boundary(s: &SubdividedComplex, chain: &Chain) -> Chain {
    let inc = Incidence::of_subdivision(s);
    Chain { degree: 0, bits: inc.boundary1(&chain.bits) }
}

/// Absolute homology data of the unsubdivided 1-skeleton.
#[derive(Clone, Debug)]
pub(crate) struct AbsoluteH1 {
    pub dimension: usize,
    n_faces: usize,
    span: EchelonBasis,
}

impl AbsoluteH1 {
    pub fn of(inc: &Incidence) -> Self {
        let mut finder = EchelonBasis::new(inc.n_vertices, inc.n_edges.max(1));
        let mut z = 0;
        for e in 0..inc.n_edges {
            if finder.insert_or_relation(e, &inc.edge_vertices_vec(e)).is_some() {
                z += 1;
            }
        }
        let n_faces = inc.face_edges.len();
        let mut span = EchelonBasis::new(inc.n_edges, n_faces + inc.n_edges);
        let mut rank_b = 0;
        for f in 0..n_faces {
            if span.insert(f, &inc.face_boundary(f)) {
                rank_b += 1;
            }
        }
        Self { dimension: z - rank_b, n_faces, span }
    }

    /// Adds a cycle to the span; `false` if it is dependent modulo
    /// boundaries and previously added cycles.
    pub fn add_cycle(&mut self, k: usize, z: &BitVec) -> bool {
        self.span.insert(self.n_faces + k, z)
    }
}

/// A cubication together with reference cycles standing in for the
/// marking: edge cycles independent in `H1(Σ; Z/2)`. They may run along
/// `∂Σ`; after some flips next to the boundary no interior cycle is left in
/// their class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedCubication {
    complex: QuadGMap,
    /// Edge sets (edge ids of `complex`).
    reference_cycles: Vec<Chain>,
    h1_dimension: usize,
}

impl MarkedCubication {
    /// Validates the cycles: closed, independent, at most `b1`.
    pub fn new(complex: QuadGMap, reference_cycles: Vec<Chain>) -> Result<Self, HomologyError> {
        classify_surface(&complex)?;
        let inc = Incidence::of(&complex);
        let mut abs = AbsoluteH1::of(&inc);
        if reference_cycles.len() > abs.dimension {
            return Err(HomologyError::TooMany { given: reference_cycles.len(), dim: abs.dimension });
        }
        for (k, rho) in reference_cycles.iter().enumerate() {
            if rho.degree != 1 || rho.bits.len() != inc.n_edges {
                return Err(HomologyError::NotACycle(k));
            }
            if !inc.boundary1(&rho.bits).is_zero() {
                return Err(HomologyError::NotACycle(k));
            }
            if !abs.add_cycle(k, &rho.bits) {
                return Err(HomologyError::Dependent);
            }
        }
        Ok(Self { complex, reference_cycles, h1_dimension: abs.dimension })
    }

    /// Reference cycles given as one dart per edge.
    pub fn from_dart_cycles(
        complex: QuadGMap,
        cycles: &[Vec<Dart>],
    ) -> Result<Self, HomologyError> {
        let edges = complex.gmap().orbits(&[0, 2]);
        let mut chains = Vec::new();
        for c in cycles {
            let mut chain = Chain::zero(1, edges.count);
            for &d in c {
                let id = edges.id.get(d as usize).ok_or(HomologyError::BadDart(d))?;
                chain.bits.flip(*id as usize);
            }
            chains.push(chain);
        }
        Self::new(complex, chains)
    }

    /// Marks a complex with short fundamental cycles of a breadth-first
    /// spanning tree, of the interior 1-skeleton first and of the whole
    /// skeleton where the interior does not carry all of `H1`.
    pub fn auto(complex: QuadGMap) -> Result<Self, HomologyError> {
        classify_surface(&complex)?;
        let inc = Incidence::of(&complex);
        let mut abs = AbsoluteH1::of(&inc);
        let mut candidates = fundamental_cycles(&inc, false);
        candidates.extend(fundamental_cycles(&inc, true));
        let mut chosen = Vec::new();
        for z in candidates {
            if chosen.len() == abs.dimension {
                break;
            }
            if abs.add_cycle(chosen.len(), &z) {
                chosen.push(Chain { degree: 1, bits: z });
            }
        }
        Ok(Self { complex, reference_cycles: chosen, h1_dimension: abs.dimension })
    }

    pub fn complex(&self) -> &QuadGMap {
        &self.complex
    }

    pub fn reference_cycles(&self) -> &[Chain] {
        &self.reference_cycles
    }

    pub fn h1_dimension(&self) -> usize {
        self.h1_dimension
    }

    /// Whether the reference cycles form a basis of `H1(Σ; Z/2)`.
    pub fn is_complete(&self) -> bool {
        self.reference_cycles.len() == self.h1_dimension
    }

    /// Reference cycles as one dart per edge, for serialisation.
    pub fn dart_cycles(&self) -> Vec<Vec<Dart>> {
        let reps = self.complex.gmap().orbits(&[0, 2]).representatives();
        self.reference_cycles.iter().map(|c| c.cells().map(|e| reps[e]).collect()).collect()
    }
}

/// Fundamental cycles of a BFS forest, shortest first, over interior edges
/// unless `with_boundary`.
fn fundamental_cycles(inc: &Incidence, with_boundary: bool) -> Vec<BitVec> {
    let usable = |e: usize| with_boundary || !inc.edge_on_boundary[e];
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); inc.n_vertices];
    for e in 0..inc.n_edges {
        if !usable(e) {
            continue;
        }
        let (u, w) = inc.endpoints[e];
        adj[u].push((w, e));
        if u != w {
            adj[w].push((u, e));
        }
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; inc.n_vertices];
    let mut depth = vec![usize::MAX; inc.n_vertices];
    let mut tree_edge = vec![false; inc.n_edges];
    for root in 0..inc.n_vertices {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in &adj[u] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[u] + 1;
                    parent[w] = Some((u, e));
                    tree_edge[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    let path_to_root = |mut v: usize, out: &mut BitVec| {
        while let Some((p, e)) = parent[v] {
            out.flip(e);
            v = p;
        }
    };
    let mut cycles: Vec<BitVec> = (0..inc.n_edges)
        .filter(|&e| usable(e) && !tree_edge[e])
        .map(|e| {
            let (u, w) = inc.endpoints[e];
            let mut z = BitVec::from_indices(inc.n_edges, [e]);
            path_to_root(u, &mut z);
            path_to_root(w, &mut z);
            z
        })
        .collect();
    cycles.sort_by_key(|z| z.count_ones());
    cycles
}

/// The flip invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantJ {
    pub j2: bool,
    /// `<j1, ρ_i>` for every reference cycle.
    pub j1_pairings: BitVec,
    pub j1_is_zero: bool,
    pub boundary: BoundarySignature,
}

impl InvariantJ {
    /// The part of the invariant that does not depend on a marking.
    pub fn absolute(&self) -> (bool, bool, BoundarySignature) {
        (self.j2, self.j1_is_zero, self.boundary.clone())
    }
}

impl fmt::Display for InvariantJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "j2={} j1_zero={} pairings={} boundary={}",
            u8::from(self.j2),
            self.j1_is_zero,
            self.j1_pairings,
            self.boundary
        )
    }
}

/// `j1 = 0` test on an unmarked complex: the section arcs bound a 2-chain
/// up to edges on `∂Σ`.
pub fn j1_is_zero(q: &QuadGMap) -> bool {
    let s = subdivide(q);
    let inc = Incidence::of_subdivision(&s);
    let n_faces = inc.face_edges.len();
    let mut span = EchelonBasis::new(inc.n_edges, n_faces);
    for f in 0..n_faces {
        span.insert(f, &inc.drop_boundary_edges(inc.face_boundary(f)));
    }
    span.express(&inc.drop_boundary_edges(midcurve_chain(&s).bits)).is_some()
}

pub fn j_invariant(m: &MarkedCubication) -> Result<InvariantJ, HomologyError> {
    let q = &m.complex;
    classify_surface(q)?;
    let j2 = q.n_faces() % 2 == 1;
    let curves = extract_curves(q).map_err(|e| HomologyError::Internal(e.to_string()))?;
    if (curves.double_point_count % 2 == 1) != j2 {
        return Err(HomologyError::Internal("double point parity differs from face parity".into()));
    }
    let j1_pairings = BitVec::from_indices(
        m.reference_cycles.len(),
        m.reference_cycles.iter().enumerate().filter(|(_, r)| r.size() % 2 == 1).map(|(k, _)| k),
    );
    let zero = j1_is_zero(q);
    if m.is_complete() && zero != j1_pairings.is_zero() {
        return Err(HomologyError::Internal(
            "pairings disagree with the relative homology class".into(),
        ));
    }
    Ok(InvariantJ { j2, j1_pairings, j1_is_zero: zero, boundary: boundary_signature(q) })
}

/// Spoke-only relative cycles spanning `H1(Σ, ∂Σ)`: closed dual paths
/// through face centres and edge midpoints.
pub fn dual_cycle_basis(s: &SubdividedComplex) -> Vec<Chain> {
    let h = h1_rel(s);
    let inc = Incidence::of_subdivision(s);
    let spokes: Vec<usize> = s.spokes().collect();
    let mut finder = EchelonBasis::new(inc.n_vertices, spokes.len().max(1));
    let mut out = Vec::new();
    let mut seen = EchelonBasis::new(h.dimension.max(1), spokes.len().max(1));
    for (k, &e) in spokes.iter().enumerate() {
        let col = inc.drop_boundary_vertices(inc.edge_vertices_vec(e));
        if let Some(rel) = finder.insert_or_relation(k, &col) {
            let z = Chain::from_cells(1, inc.n_edges, rel.ones().map(|t| spokes[t]));
            let coords = h.coordinates(&z).expect("relation is a relative cycle");
            if h.dimension > 0 && seen.insert(out.len(), &coords) {
                out.push(z);
            }
        }
    }
    out
}

/// Mod-2 intersection number of a spoke cycle with an edge cycle of the
/// original complex: the spoke cycle crosses edge `e` when it passes through
/// the midpoint of `e`.
pub fn intersection_parity(s: &SubdividedComplex, spoke_cycle: &Chain, edge_cycle: &Chain) -> bool {
    let mut spokes_at = vec![0usize; s.n_vertices()];
    let ends = s.edge_endpoints();
    for e in spoke_cycle.cells() {
        debug_assert!(matches!(s.edge_origin[e], EdgeOrigin::Spoke(_)));
        let (u, w) = ends[e];
        spokes_at[u] += 1;
        spokes_at[w] += 1;
    }
    let mut parity = false;
    for (v, origin) in s.vertex_origin.iter().enumerate() {
        if let VertexOrigin::Midpoint(e) = origin {
            if edge_cycle.bits.get(*e) && spokes_at[v] == 2 {
                parity = !parity;
            }
        }
    }
    parity
}

/// Intersection matrix between a dual basis of `H1(Σ, ∂Σ)` and the
/// reference cycles; rows are dual cycles.
pub fn pairing_matrix(m: &MarkedCubication) -> Vec<BitVec> {
    let s = subdivide(&m.complex);
    dual_cycle_basis(&s)
        .iter()
        .map(|z| {
            BitVec::from_indices(
                m.reference_cycles.len(),
                m.reference_cycles
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| intersection_parity(&s, z, r))
                    .map(|(k, _)| k),
            )
        })
        .collect()
}

/// Which complex a square of a certificate lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Before,
    After,
}

/// Evidence that a flip keeps `j`: the section arcs of the removed patch
/// and of the inserted one together bound a union of quarter squares of the
/// two patches (glued, they form the cube boundary), and the invariants
/// computed before and after agree.
#[derive(Clone, Debug)]
pub struct FlipCertificate {
    /// (complex, face, quarter) for every quarter square of the bounding
    /// 2-chain; quarters are numbered by the corner dart of the face.
    pub bounding_chain: Vec<(Side, usize, Dart)>,
    pub before: InvariantJ,
    pub after: InvariantJ,
}

impl FlipCertificate {
    pub fn holds(&self) -> bool {
        !self.bounding_chain.is_empty() && self.before == self.after
    }
}

pub fn verify_flip_preserves_j(
    m: &MarkedCubication,
    site: &crate::flips::FlipSite,
) -> Result<FlipCertificate, crate::flips::FlipError> {
    use crate::flips::FlipError;
    use crate::gmap::GMap;

    let q = m.complex();
    let rw = site.kind.rewrite();
    let sub = crate::flips::check_site(q, site)?;
    let after = crate::flips::apply_flip(m, site)?;

    // the two patches glued along their common boundary
    let n = rw.from.n_darts() as Dart;
    let mut links: Vec<[Dart; 3]> = rw.from.map().links().to_vec();
    links.extend(rw.to.map().links().iter().map(|l| [l[0] + n, l[1] + n, l[2] + n]));
    for (x, &p) in rw.bmap.iter().enumerate() {
        if p != crate::flips::pattern::NONE {
            links[n as usize + x][2] = p;
            links[p as usize][2] = n + x as Dart;
        }
    }
    let sphere = QuadGMap::new(GMap::from_links(links))
        .map_err(|r| FlipError::Internal(format!("patches do not close up: {r}")))?;
    let s = subdivide(&sphere);
    let inc = Incidence::of_subdivision(&s);
    let target = midcurve_chain(&s).bits;
    let columns: Vec<BitVec> = (0..s.n_faces()).map(|f| inc.face_boundary(f)).collect();
    let x = crate::bits::solve(&columns, &target)
        .ok_or_else(|| FlipError::Internal("section arcs of the patches do not bound".into()))?;
    let mut check = BitVec::zeros(inc.n_edges);
    for f in x.ones() {
        check.xor_assign(&columns[f]);
    }
    if check != target {
        return Err(FlipError::Internal("bounding chain check failed".into()));
    }

    let old_faces = q.gmap().orbits(&[0, 1]);
    let new_faces = sub.result.gmap().orbits(&[0, 1]);
    let reps = s.cells.faces.representatives();
    let bounding_chain = x
        .ones()
        .map(|f| {
            let d = reps[f] / 4;
            if d < n {
                let c = site.image[d as usize];
                (Side::Before, old_faces.id[c as usize] as usize, c)
            } else {
                let c = sub.patch_base + (d - n);
                (Side::After, new_faces.id[c as usize] as usize, c)
            }
        })
        .collect();
    Ok(FlipCertificate {
        bounding_chain,
        before: j_invariant(m)?,
        after: j_invariant(&after)?,
    })
}
