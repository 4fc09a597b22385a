//! Exhaustive search for least-perimeter window patterns on small balls,
//! reduced modulo the symmetries of the square.

use std::collections::BTreeSet;

use rayon::prelude::*;

use super::analysis::{classify_plane, dihedral, BoundaryAnalysis, Plane};
use crate::currents::IndicatorOracle;
use crate::error::{Error, Result};
use crate::lattice::{Point, VertexSet, Window};
use crate::mincut::all_least_perimeter;

/// Largest radius accepted by [`enumerate_candidates`].
pub const MAX_ENUMERATION_RADIUS: i64 = 5;

/// Cap on the optimal fillings collected for a single trace.
const OPTIMA_PER_TRACE: usize = 1 << 14;

#[derive(Clone, Debug)]
pub struct Enumeration {
    pub radius: i64,
    /// One representative per symmetry class, on `B̂_r` around the origin.
    pub candidates: Vec<VertexSet>,
    /// Number of symmetry-distinct traces examined.
    pub traces: usize,
    /// The budget ran out before every trace (or every filling) was seen.
    pub partial: bool,
}

fn ball(r: i64) -> Window {
    Window::ball(&Point::from([0, 0]), r)
}

/// The lexicographically smallest image of a membership vector (indexed by
/// `pts`) under the eight symmetries.
fn canonical(pts: &[Point], member: impl Fn(i64, i64) -> bool) -> Vec<bool> {
    (0..8)
        .map(|k| {
            pts.iter()
                .map(|p| {
                    let (x, y) = dihedral(k, p[0], p[1]);
                    member(x, y)
                })
                .collect::<Vec<bool>>()
        })
        .min()
        .unwrap()
}

/// Enumerates every `{0,1}` trace on `τB̂_r` and every interior filling that
/// admits a minimal current on `B̂_r`, keeping one pattern per symmetry class.
///
/// `budget` bounds the number of symmetry-distinct traces examined.
pub fn enumerate_candidates(r: i64, budget: usize) -> Result<Enumeration> {
    if !(1..=MAX_ENUMERATION_RADIUS).contains(&r) {
        return Err(Error::Invalid(format!(
            "enumeration radius must lie in 1..={MAX_ENUMERATION_RADIUS}, got {r}"
        )));
    }
    let w = ball(r);
    let tau: Vec<Point> = w.tau_points().collect();
    let slot = |x: i64, y: i64| tau.iter().position(|q| q[0] == x && q[1] == y).unwrap();
    let perms: Vec<Vec<usize>> = (0..8)
        .map(|k| {
            tau.iter()
                .map(|p| {
                    let (x, y) = dihedral(k, p[0], p[1]);
                    slot(x, y)
                })
                .collect()
        })
        .collect();
    let permute = |mask: u64, perm: &[usize]| {
        perm.iter()
            .enumerate()
            .fold(0u64, |acc, (i, &j)| acc | ((mask >> i & 1) << j))
    };

    let mut traces = Vec::new();
    let mut partial = false;
    for mask in 0..1u64 << tau.len() {
        if perms.iter().any(|p| permute(mask, p) < mask) {
            continue;
        }
        if traces.len() == budget {
            partial = true;
            break;
        }
        traces.push(mask);
    }

    let closure: Vec<Point> = w.closure_points().collect();
    let oracle = IndicatorOracle::new(&w);
    let found: Vec<(Vec<Vec<bool>>, bool)> = traces
        .par_iter()
        .map(|&mask| {
            let phi = VertexSet::from_fn(&w, |p| tau_bit(&tau, mask, p));
            let all = all_least_perimeter(&w, &phi, OPTIMA_PER_TRACE)?;
            let mut keys = Vec::new();
            for k in &all.optima {
                let member: Vec<bool> = oracle.graph().points.iter().map(|p| k.get(p)).collect();
                if oracle.feasible(&member) {
                    keys.push(canonical(&closure, |x, y| k.get(&Point::from([x, y]))));
                }
            }
            Ok((keys, !all.complete))
        })
        .collect::<Result<_>>()?;

    let mut classes = BTreeSet::new();
    for (keys, cut_short) in found {
        partial |= cut_short;
        classes.extend(keys);
    }
    let candidates = classes
        .into_iter()
        .map(|key| {
            VertexSet::from_points(
                &w,
                closure.iter().zip(key).filter(|(_, b)| *b).map(|(p, _)| p),
            )
        })
        .collect();
    Ok(Enumeration {
        radius: r,
        candidates,
        traces: traces.len(),
        partial,
    })
}

fn tau_bit(tau: &[Point], mask: u64, p: &Point) -> bool {
    tau.iter()
        .position(|q| q == p)
        .is_some_and(|i| mask >> i & 1 == 1)
}

/// Shapes of the four-neighbourhood of a boundary vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LocalForm {
    /// Three member neighbours.
    Flat,
    /// Two perpendicular member neighbours.
    Corner,
    /// Two opposite member neighbours.
    Straight,
    /// At most one member neighbour.
    Dangling,
}

impl LocalForm {
    pub fn of(neighbours: [bool; 4]) -> Option<LocalForm> {
        let n = neighbours.iter().filter(|&&b| b).count();
        match n {
            4 => None,
            3 => Some(LocalForm::Flat),
            2 if neighbours[0] == neighbours[2] => Some(LocalForm::Straight),
            2 => Some(LocalForm::Corner),
            _ => Some(LocalForm::Dangling),
        }
    }
}

/// The distinct neighbourhood shapes of the centre vertex over all
/// candidates in which the centre is a boundary vertex of the pattern.
pub fn local_boundary_forms(e: &Enumeration) -> BTreeSet<LocalForm> {
    let o = Point::from([0, 0]);
    e.candidates
        .iter()
        .filter(|k| k.get(&o))
        .filter_map(|k| {
            let nb = [(1, 0), (0, 1), (-1, 0), (0, -1)].map(|(x, y)| k.get(&Point::from([x, y])));
            LocalForm::of(nb)
        })
        .collect()
}

/// Boundary analysis of a window pattern over its window, reading the τ
/// layer as given and everything beyond it as empty.
pub fn classify_window_set(k: &VertexSet) -> BoundaryAnalysis {
    let w = k.window();
    let plane = Plane::new(&w.dilated(), |x, y| k.get(&Point::from([x, y])));
    classify_plane(&plane, w)
}
