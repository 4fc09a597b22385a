//! Exact least-perimeter solver: the Dirichlet problem "minimize `|∂K ∩ E_U|`
//! over `K ⊆ closure(U)` with prescribed trace on `τU`" as an s-t minimum
//! cut, plus an exhaustive oracle for small windows.

use crate::energy::perimeter;
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::lattice::{VertexSet, Window, WindowGraph};

/// Largest window the brute-force oracle accepts.
pub const BRUTE_FORCE_LIMIT: usize = 25;

#[derive(Clone, Debug)]
pub struct LeastPerimeter {
    /// Canonical optimizer: the source side of the minimum cut.
    pub set: VertexSet,
    pub value: u64,
}

/// Capacity standing in for infinity: strictly above any cut through lattice edges.
pub fn infinite_capacity(u: &Window) -> i64 {
    4 * u.dim() as i64 * u.len() as i64 + 1
}

/// Solves the least-perimeter problem on `u` with boundary data read from
/// `phi` on `τU` (interior values of `phi` are ignored).
///
/// The optimizer returned is the set of vertices reachable from the source in
/// the final residual graph, i.e. the smallest minimum-cut source side.
pub fn least_perimeter_solve(u: &Window, phi: &VertexSet) -> Result<LeastPerimeter> {
    let g = WindowGraph::new(u);
    let fixed = trace_of(&g, phi)?;
    let (value, side, _) = cut_with(&g, u, &fixed);
    let set = VertexSet::from_fn(u, |p| side[g.node(p).unwrap()]);
    Ok(LeastPerimeter { set, value })
}

fn trace_of(g: &WindowGraph, phi: &VertexSet) -> Result<Vec<Option<bool>>> {
    g.points
        .iter()
        .enumerate()
        .map(|(v, p)| {
            if g.interior[v] {
                Ok(None)
            } else {
                phi.contains(p).map(Some)
            }
        })
        .collect()
}

/// Minimum cut with some vertices pinned to a side. Returns the value, the
/// smallest optimal source side and the largest one.
fn cut_with(g: &WindowGraph, u: &Window, fixed: &[Option<bool>]) -> (u64, Vec<bool>, Vec<bool>) {
    let (s, t) = (g.len(), g.len() + 1);
    let mut net = FlowNetwork::new(g.len() + 2);
    let inf = infinite_capacity(u);
    for &(a, b, _) in &g.edges {
        net.add_arc(a, b, 1, 1);
    }
    for (v, f) in fixed.iter().enumerate() {
        match f {
            Some(true) => {
                net.add_edge(s, v, inf);
            }
            Some(false) => {
                net.add_edge(v, t, inf);
            }
            None => {}
        }
    }
    let value = net.max_flow(s, t) as u64;
    let small = net.reachable_from(s);
    let large = net.reaching(t).into_iter().map(|r| !r).collect();
    (value, small, large)
}

/// Every least-perimeter set with the trace of `phi` (deterministic order),
/// stopping after `limit` sets.
///
/// Minimum cuts form a lattice: when the smallest and largest optimal source
/// sides differ at some vertex, both pinnings of that vertex keep the
/// optimum, so the branching never visits a dead end.
pub fn all_least_perimeter(u: &Window, phi: &VertexSet, limit: usize) -> Result<AllOptima> {
    let g = WindowGraph::new(u);
    let fixed = trace_of(&g, phi)?;
    let mut out = AllOptima {
        value: cut_with(&g, u, &fixed).0,
        optima: Vec::new(),
        complete: true,
    };
    let mut stack = vec![fixed];
    while let Some(fixed) = stack.pop() {
        if out.optima.len() >= limit {
            out.complete = false;
            break;
        }
        let (_, small, large) = cut_with(&g, u, &fixed);
        match (0..g.len()).find(|&v| small[v] != large[v]) {
            None => out
                .optima
                .push(VertexSet::from_fn(u, |p| small[g.node(p).unwrap()])),
            Some(v) => {
                let mut hi = fixed.clone();
                hi[v] = Some(true);
                let mut lo = fixed;
                lo[v] = Some(false);
                stack.push(hi);
                stack.push(lo);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct AllOptima {
    pub value: u64,
    pub optima: Vec<VertexSet>,
    /// False when the enumeration stopped at the limit.
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct BruteForce {
    pub value: u64,
    /// Every optimizer, in order of the interior bitmask (first interior cell = bit 0).
    pub optima: Vec<VertexSet>,
}

/// Exhaustive minimum over all `2^|U|` interior assignments (Gray-code order).
pub fn brute_force_least_perimeter(u: &Window, phi: &VertexSet) -> Result<BruteForce> {
    if u.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::WindowTooLarge {
            cells: u.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let g = WindowGraph::new(u);
    let interior: Vec<usize> = (0..g.len()).filter(|&v| g.interior[v]).collect();
    let mut slot = vec![usize::MAX; g.len()];
    for (i, &v) in interior.iter().enumerate() {
        slot[v] = i;
    }
    let mut state = vec![false; g.len()];
    for (v, p) in g.points.iter().enumerate() {
        if !g.interior[v] {
            state[v] = phi.contains(p)?;
        }
    }
    let nbrs: Vec<Vec<usize>> = interior
        .iter()
        .map(|&v| {
            g.incident[v]
                .iter()
                .map(|&e| {
                    let (a, b, _) = g.edges[e];
                    if a == v {
                        b
                    } else {
                        a
                    }
                })
                .collect()
        })
        .collect();
    let mut cur: i64 = g
        .edges
        .iter()
        .filter(|&&(a, b, _)| state[a] != state[b])
        .count() as i64;
    let m = interior.len();
    let mut best = cur;
    let mut masks: Vec<u32> = vec![0];
    let mut mask: u32 = 0;
    for step in 1u64..(1u64 << m) {
        let i = step.trailing_zeros() as usize;
        let v = interior[i];
        for &w in &nbrs[i] {
            cur += if state[v] == state[w] { 1 } else { -1 };
        }
        state[v] = !state[v];
        mask ^= 1 << i;
        if cur < best {
            best = cur;
            masks.clear();
            masks.push(mask);
        } else if cur == best {
            masks.push(mask);
        }
    }
    masks.sort_unstable();
    let optima = masks
        .into_iter()
        .map(|mk| {
            VertexSet::from_fn(u, |p| {
                let v = g.node(p).unwrap();
                if g.interior[v] {
                    mk >> slot[v] & 1 == 1
                } else {
                    state[v]
                }
            })
        })
        .collect();
    Ok(BruteForce {
        value: best as u64,
        optima,
    })
}

/// Whether `k` has least perimeter in `u` among sets with its own τ-trace.
pub fn is_least_perimeter(k: &VertexSet, u: &Window) -> Result<bool> {
    let own = perimeter(k, u)?;
    Ok(own == least_perimeter_solve(u, k)?.value)
}
