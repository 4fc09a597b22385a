//! Integral maximum flow by shortest augmenting paths on level graphs
//! (Dinic). Arc order is fixed by insertion, so results are deterministic.

use std::collections::VecDeque;

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    cap: i64,
    rev: usize,
}

#[derive(Clone, Debug)]
pub struct FlowNetwork {
    graph: Vec<Vec<Arc>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

/// Handle to an arc, `(node, position)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcId(usize, usize);

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            graph: vec![Vec::new(); nodes],
            level: vec![0; nodes],
            iter: vec![0; nodes],
        }
    }

    /// Empties the network down to `nodes` isolated nodes, keeping allocations.
    pub fn reset(&mut self, nodes: usize) {
        self.graph.resize_with(nodes, Vec::new);
        self.graph.iter_mut().for_each(Vec::clear);
        self.level.resize(nodes, 0);
        self.iter.resize(nodes, 0);
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    /// Arc `u -> v` with capacity `cap`; the paired reverse arc gets `rev_cap`
    /// (use `rev_cap == cap` for an undirected edge).
    pub fn add_arc(&mut self, u: usize, v: usize, cap: i64, rev_cap: i64) -> ArcId {
        assert!(u != v, "self loops are not supported");
        let iu = self.graph[u].len();
        let iv = self.graph[v].len();
        self.graph[u].push(Arc {
            to: v,
            cap,
            rev: iv,
        });
        self.graph[v].push(Arc {
            to: u,
            cap: rev_cap,
            rev: iu,
        });
        ArcId(u, iu)
    }

    pub fn add_edge(&mut self, u: usize, v: usize, cap: i64) -> ArcId {
        self.add_arc(u, v, cap, 0)
    }

    /// Residual capacity of an arc.
    pub fn residual(&self, id: ArcId) -> i64 {
        self.graph[id.0][id.1].cap
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut q = VecDeque::new();
        self.level[s] = 0;
        q.push_back(s);
        while let Some(v) = q.pop_front() {
            for a in &self.graph[v] {
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[v] + 1;
                    q.push_back(a.to);
                }
            }
        }
    }

    /// Blocking-flow augmentation with an explicit stack.
    fn augment(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            // find one level-increasing path from s to t
            let mut path: Vec<(usize, usize)> = Vec::new();
            let mut v = s;
            loop {
                if v == t {
                    break;
                }
                let mut advanced = false;
                while self.iter[v] < self.graph[v].len() {
                    let i = self.iter[v];
                    let a = &self.graph[v][i];
                    if a.cap > 0 && self.level[a.to] == self.level[v] + 1 {
                        path.push((v, i));
                        v = a.to;
                        advanced = true;
                        break;
                    }
                    self.iter[v] += 1;
                }
                if !advanced {
                    // dead end: retreat
                    match path.pop() {
                        Some((u, _)) => {
                            self.iter[u] += 1;
                            v = u;
                        }
                        None => return total,
                    }
                }
            }
            let push = path
                .iter()
                .map(|&(u, i)| self.graph[u][i].cap)
                .min()
                .unwrap_or(0);
            for &(u, i) in &path {
                let (to, rev) = {
                    let a = &mut self.graph[u][i];
                    a.cap -= push;
                    (a.to, a.rev)
                };
                self.graph[to][rev].cap += push;
            }
            total += push;
        }
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            flow += self.augment(s, t);
        }
    }

    /// Nodes reachable from `s` in the residual graph.
    pub fn reachable_from(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.graph.len()];
        let mut q = VecDeque::from([s]);
        seen[s] = true;
        while let Some(v) = q.pop_front() {
            for a in &self.graph[v] {
                if a.cap > 0 && !seen[a.to] {
                    seen[a.to] = true;
                    q.push_back(a.to);
                }
            }
        }
        seen
    }

    /// Nodes from which `t` is reachable in the residual graph.
    pub fn reaching(&self, t: usize) -> Vec<bool> {
        let mut seen = vec![false; self.graph.len()];
        let mut q = VecDeque::from([t]);
        seen[t] = true;
        while let Some(v) = q.pop_front() {
            for a in &self.graph[v] {
                // a.to -> v has residual capacity graph[a.to][a.rev]
                if !seen[a.to] && self.graph[a.to][a.rev].cap > 0 {
                    seen[a.to] = true;
                    q.push_back(a.to);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_network() {
        let mut n = FlowNetwork::new(6);
        n.add_edge(0, 1, 10);
        n.add_edge(0, 2, 10);
        n.add_edge(1, 3, 4);
        n.add_edge(1, 4, 8);
        n.add_edge(2, 4, 9);
        n.add_edge(3, 5, 10);
        n.add_edge(4, 3, 6);
        n.add_edge(4, 5, 10);
        assert_eq!(n.max_flow(0, 5), 19);
        let side = n.reachable_from(0);
        assert!(side[0] && !side[5]);
        let sink = n.reaching(5);
        assert!(sink[5] && !sink[0]);
        assert!((0..6).all(|v| !(side[v] && sink[v])));
    }

    #[test]
    fn undirected_edge_carries_either_way() {
        let mut n = FlowNetwork::new(4);
        n.add_edge(0, 2, 5);
        let mid = n.add_arc(1, 2, 1, 1);
        n.add_edge(1, 3, 5);
        assert_eq!(n.max_flow(0, 3), 1);
        // one unit went 2 -> 1, against the arc's nominal direction
        assert_eq!(n.residual(mid), 2);
    }

    #[test]
    fn disconnected_is_zero() {
        let mut n = FlowNetwork::new(3);
        n.add_edge(0, 1, 3);
        assert_eq!(n.max_flow(0, 2), 0);
    }
}
