//! Canonical codes for connected generalized maps.
//!
//! A breadth-first relabelling is started from a dart; darts are numbered in
//! discovery order while visiting `a0, a1, a2` of each labelled dart in turn.
//! The transcript of labels is independent of the input numbering, and the
//! lexicographically smallest transcript over all start darts identifies the
//! map up to isomorphism. Start darts are first filtered by a cheap
//! relabelling-invariant key (vertex valences around the dart), which is
//! included in the code.

use std::fmt;

use crate::gmap::{Dart, GMap, QuadGMap};
use crate::surface::TopologyError;

/// Relabelling-invariant identifier of a connected map.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(Vec<u32>);

impl CanonicalCode {
    /// Little-endian byte serialisation.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.0.iter().flat_map(|w| w.to_le_bytes()).collect()
    }

    pub fn as_words(&self) -> &[u32] {
        &self.0
    }

    /// 64-bit FNV-1a digest, for compact display.
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.to_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({:016x})", self.digest())
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}", self.digest())
    }
}

/// Canonical code together with the relabelling that realises it:
/// `labels[d]` is the canonical name of dart `d`.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub code: CanonicalCode,
    pub labels: Vec<Dart>,
}

struct Scratch {
    label: Vec<u32>,
    order: Vec<Dart>,
    stamp: Vec<u32>,
    epoch: u32,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Self { label: vec![0; n], order: Vec::with_capacity(n), stamp: vec![0; n], epoch: 0 }
    }
}

/// Runs the BFS transcript from `start`, comparing against `best` as it goes.
/// Returns `None` as soon as the transcript is known to be larger than
/// `best`. On success the transcript is written to `out`.
fn transcript(
    map: &GMap,
    start: Dart,
    best: Option<&[u32]>,
    scratch: &mut Scratch,
    out: &mut Vec<u32>,
) -> Option<()> {
    scratch.epoch += 1;
    let epoch = scratch.epoch;
    scratch.order.clear();
    out.clear();
    scratch.stamp[start as usize] = epoch;
    scratch.label[start as usize] = 0;
    scratch.order.push(start);
    let mut smaller = best.is_none();
    let mut k = 0;
    while k < scratch.order.len() {
        let x = scratch.order[k];
        for i in 0..3 {
            let y = map.alpha(i, x);
            if scratch.stamp[y as usize] != epoch {
                scratch.stamp[y as usize] = epoch;
                scratch.label[y as usize] = scratch.order.len() as u32;
                scratch.order.push(y);
            }
            let l = scratch.label[y as usize];
            if !smaller {
                let b = best.unwrap()[out.len()];
                if l > b {
                    return None;
                }
                if l < b {
                    smaller = true;
                }
            }
            out.push(l);
        }
        k += 1;
    }
    if !smaller {
        // equal to best: not an improvement, but not larger either
        return None;
    }
    Some(())
}

fn start_keys(map: &GMap) -> Vec<u64> {
    let vertices = map.orbits(&[1, 2]);
    let vsize = vertices.sizes();
    let faces_at = |d: Dart| vsize[vertices.id[d as usize] as usize] as u64;
    map.darts()
        .map(|d| {
            let boundary = u64::from(map.is_boundary_dart(d));
            (boundary << 48) | (faces_at(d) << 24) | faces_at(map.alpha(0, d))
        })
        .collect()
}

/// Whether `root` attains the smallest transcript, so that a search producing
/// every rooting of a class can keep exactly the rootings at a minimal start.
pub(crate) fn is_minimal_root(map: &GMap, root: Dart) -> bool {
    let n = map.n_darts();
    let keys = start_keys(map);
    let min_key = *keys.iter().min().unwrap();
    if keys[root as usize] != min_key {
        return false;
    }
    let mut scratch = Scratch::new(n);
    let mut best = Vec::with_capacity(3 * n);
    transcript(map, root, None, &mut scratch, &mut best);
    let mut buf = Vec::with_capacity(3 * n);
    map.darts()
        .filter(|&d| d != root && keys[d as usize] == min_key)
        .all(|d| transcript(map, d, Some(&best), &mut scratch, &mut buf).is_none())
}

/// Canonical form of a connected generalized map.
pub fn canonical_form_map(map: &GMap) -> Result<CanonicalForm, TopologyError> {
    if !map.is_connected() {
        return Err(TopologyError::Disconnected);
    }
    let n = map.n_darts();
    let keys = start_keys(map);
    let min_key = *keys.iter().min().unwrap();
    let mut scratch = Scratch::new(n);
    let mut best: Option<(Dart, Vec<u32>)> = None;
    let mut buf = Vec::with_capacity(3 * n);
    for d in map.darts().filter(|&d| keys[d as usize] == min_key) {
        let prev = best.as_ref().map(|(_, t)| t.as_slice());
        if transcript(map, d, prev, &mut scratch, &mut buf).is_some() {
            best = Some((d, std::mem::take(&mut buf)));
            buf = Vec::with_capacity(3 * n);
        }
    }
    let (start, words) = best.expect("at least one start dart");
    // rerun to recover the labels of the winning start
    transcript(map, start, None, &mut scratch, &mut buf);
    let labels = (0..n).map(|d| scratch.label[d]).collect();
    let mut code = Vec::with_capacity(words.len() + 3);
    code.push(n as u32);
    code.push((min_key >> 32) as u32);
    code.push(min_key as u32);
    code.extend(words);
    Ok(CanonicalForm { code: CanonicalCode(code), labels })
}

pub fn canonical_form(q: &QuadGMap) -> Result<CanonicalForm, TopologyError> {
    canonical_form_map(q.gmap())
}

pub fn canonical_code(q: &QuadGMap) -> Result<CanonicalCode, TopologyError> {
    canonical_form(q).map(|f| f.code)
}

/// The canonically relabelled copy of a complex.
pub fn canonical_relabel(q: &QuadGMap) -> Result<QuadGMap, TopologyError> {
    let form = canonical_form(q)?;
    Ok(q.relabel(&form.labels))
}

pub fn is_isomorphic(a: &QuadGMap, b: &QuadGMap) -> Result<bool, TopologyError> {
    if a.n_darts() != b.n_darts() {
        return Ok(false);
    }
    Ok(canonical_code(a)? == canonical_code(b)?)
}

/// An explicit isomorphism `a -> b` (as a dart map), if one exists.
pub fn isomorphism(a: &QuadGMap, b: &QuadGMap) -> Result<Option<Vec<Dart>>, TopologyError> {
    if a.n_darts() != b.n_darts() {
        return Ok(None);
    }
    let fa = canonical_form(a)?;
    let fb = canonical_form(b)?;
    if fa.code != fb.code {
        return Ok(None);
    }
    let mut inv_b = vec![0; b.n_darts()];
    for (d, &l) in fb.labels.iter().enumerate() {
        inv_b[l as usize] = d as Dart;
    }
    Ok(Some(fa.labels.iter().map(|&l| inv_b[l as usize]).collect()))
}
