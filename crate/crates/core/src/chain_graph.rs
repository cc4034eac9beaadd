//! δ-chain graphs: an edge `x → y` whenever `d(f(x), y) < δ`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::dyadic::Exact;
use crate::error::{Error, Result};
use crate::metric::{PointSet, SetFamily};
use crate::systems::FiniteSystem;

/// Largest point count accepted by the exhaustive ICT enumeration.
pub const ENUMERATION_GUARD: usize = 20;

#[derive(Clone, Debug)]
pub struct ChainGraph<'a> {
    sys: &'a FiniteSystem,
    delta: Exact,
    adjacency: Vec<Vec<usize>>,
    reverse: Vec<Vec<usize>>,
}

pub fn build_chain_graph(sys: &FiniteSystem, delta: Exact) -> Result<ChainGraph<'_>> {
    if !delta.is_positive() {
        return Err(Error::Param(format!("delta must be positive, got {delta}")));
    }
    let bound = sys.embedding().strict_bound(delta);
    let n = sys.len();
    let adjacency = (0..n)
        .map(|x| {
            let fx = sys.map()[x];
            (0..n).filter(|&y| sys.dist_units(fx, y) < bound).collect()
        })
        .collect::<Vec<Vec<usize>>>();
    let mut reverse = vec![Vec::new(); n];
    for (x, succ) in adjacency.iter().enumerate() {
        for &y in succ {
            reverse[y].push(x);
        }
    }
    Ok(ChainGraph { sys, delta, adjacency, reverse })
}

impl<'a> ChainGraph<'a> {
    pub fn system(&self) -> &'a FiniteSystem {
        self.sys
    }

    pub fn delta(&self) -> Exact {
        self.delta
    }

    pub fn successors(&self, x: usize) -> &[usize] {
        &self.adjacency[x]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adjacency[x].binary_search(&y).is_ok()
    }

    /// Strongly connected components that carry at least one edge.
    pub fn chain_components(&self) -> SetFamily {
        strong_components(&self.adjacency)
            .into_iter()
            .filter(|c| c.len() > 1 || self.has_edge(c[0], c[0]))
            .map(PointSet::new)
            .collect()
    }

    /// Membership mask of the chain-recurrent set.
    pub fn chain_recurrent(&self) -> Vec<bool> {
        let mut mask = vec![false; self.sys.len()];
        for c in &self.chain_components() {
            for &id in c.ids() {
                mask[id] = true;
            }
        }
        mask
    }

    /// Whether every ordered pair of `set`, including `(a, a)`, is joined by a
    /// path of length at least one inside `set`.
    pub fn is_ict(&self, set: &PointSet) -> Result<bool> {
        self.sys.check_set(set)?;
        let mut inside = vec![false; self.sys.len()];
        for &id in set.ids() {
            inside[id] = true;
        }
        Ok(self.ict_with_mask(set.ids(), &inside))
    }

    fn ict_with_mask(&self, ids: &[usize], inside: &[bool]) -> bool {
        if ids.len() == 1 {
            return self.has_edge(ids[0], ids[0]);
        }
        let forward = self.reach_within(ids[0], inside, false);
        let backward = self.reach_within(ids[0], inside, true);
        ids.iter().all(|&id| forward[id] && backward[id])
    }

    fn reach_within(&self, start: usize, inside: &[bool], reverse: bool) -> Vec<bool> {
        let n = self.sys.len();
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            let step = |y: usize, seen: &mut Vec<bool>, stack: &mut Vec<usize>| {
                if inside[y] && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            };
            let next = if reverse { &self.reverse[x] } else { &self.adjacency[x] };
            for &y in next {
                step(y, &mut seen, &mut stack);
            }
        }
        seen
    }

    /// Points reachable from `from` along paths of length zero or more.
    pub fn reachable_from(&self, from: &PointSet) -> Vec<bool> {
        let mut seen = vec![false; self.sys.len()];
        let mut stack: Vec<usize> = from.ids().to_vec();
        for &id in &stack {
            seen[id] = true;
        }
        while let Some(x) = stack.pop() {
            for &y in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Whether some point of `to` is reachable from some point of `from`.
    pub fn reaches(&self, from: &PointSet, to: &PointSet) -> bool {
        let seen = self.reachable_from(from);
        to.ids().iter().any(|&id| seen[id])
    }

    /// Shortest path from `a` to `b` of length at least one inside `inside`,
    /// lexicographically least among shortest paths. Endpoints included.
    pub fn shortest_path_within(&self, a: usize, b: usize, inside: &[bool]) -> Option<Vec<usize>> {
        let n = self.sys.len();
        // Distances to b, so the forward walk can pick the least successor greedily.
        let mut to_b = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &y in &self.reverse[b] {
            if inside[y] {
                to_b[y] = 1;
                queue.push_back(y);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &y in &self.reverse[x] {
                if inside[y] && to_b[y] == usize::MAX {
                    to_b[y] = to_b[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if to_b[a] == usize::MAX {
            return None;
        }
        let mut path = vec![a];
        let mut cur = a;
        for remaining in (1..=to_b[a]).rev() {
            let next = if remaining == 1 {
                b
            } else {
                *self.adjacency[cur]
                    .iter()
                    .find(|&&y| inside[y] && to_b[y] == remaining - 1)
                    .expect("distance labels are consistent")
            };
            path.push(next);
            cur = next;
        }
        Some(path)
    }

    /// All ICT sets of size at most `size_bound`, over every point.
    pub fn enumerate_ict(&self, size_bound: usize) -> Result<SetFamily> {
        self.enumerate_ict_within(&self.sys.all(), size_bound)
    }

    /// All ICT subsets of `universe` of size at most `size_bound`.
    pub fn enumerate_ict_within(&self, universe: &PointSet, size_bound: usize) -> Result<SetFamily> {
        if size_bound == 0 {
            return Err(Error::Param("size bound must be at least 1".into()));
        }
        self.sys.check_set(universe)?;
        let ids = universe.ids();
        if ids.len() > ENUMERATION_GUARD {
            return Err(Error::Guard { points: ids.len(), guard: ENUMERATION_GUARD });
        }
        let mut inside = vec![false; self.sys.len()];
        let mut found = Vec::new();
        for mask in 1u32..(1u32 << ids.len()) {
            if mask.count_ones() as usize > size_bound {
                continue;
            }
            let subset: Vec<usize> = (0..ids.len()).filter(|i| mask >> i & 1 == 1).map(|i| ids[i]).collect();
            for &id in &subset {
                inside[id] = true;
            }
            if self.ict_with_mask(&subset, &inside) {
                found.push(PointSet::new(subset.clone()));
            }
            for &id in &subset {
                inside[id] = false;
            }
        }
        Ok(SetFamily::new(found))
    }

    /// Directed graph with one node per point and one edge per adjacency entry.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph chain {\n");
        writeln!(out, "  label=\"delta {}\";", self.delta).unwrap();
        for p in self.sys.points() {
            writeln!(out, "  {} [label=\"{} {}\"];", p.id, p.id, p.label()).unwrap();
        }
        for (x, succ) in self.adjacency.iter().enumerate() {
            for y in succ {
                writeln!(out, "  {x} -> {y};").unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Tarjan's algorithm, iterative. Components come out with sorted ids.
fn strong_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut next = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*i) {
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}

/// Periodic points of the map.
pub fn periodic_mask(sys: &FiniteSystem) -> Vec<bool> {
    let n = sys.len();
    let map = sys.map();
    // 0 unvisited, 1 on the current walk, 2 finished
    let mut state = vec![0u8; n];
    let mut periodic = vec![false; n];
    for start in 0..n {
        let mut walk = Vec::new();
        let mut x = start;
        while state[x] == 0 {
            state[x] = 1;
            walk.push(x);
            x = map[x];
        }
        if state[x] == 1 {
            let mut y = x;
            loop {
                periodic[y] = true;
                y = map[y];
                if y == x {
                    break;
                }
            }
        }
        for w in walk {
            state[w] = 2;
        }
    }
    periodic
}

/// The cycle through a periodic point, in map order starting at `x`.
pub fn cycle_through(sys: &FiniteSystem, x: usize) -> Vec<usize> {
    let mut cycle = vec![x];
    let mut y = sys.map()[x];
    while y != x {
        cycle.push(y);
        y = sys.map()[y];
    }
    cycle
}

/// Every cycle of the map.
pub fn cycles_of_map(sys: &FiniteSystem) -> SetFamily {
    let periodic = periodic_mask(sys);
    let mut seen = vec![false; sys.len()];
    let mut out = Vec::new();
    for x in 0..sys.len() {
        if periodic[x] && !seen[x] {
            let cycle = cycle_through(sys, x);
            for &y in &cycle {
                seen[y] = true;
            }
            out.push(PointSet::new(cycle));
        }
    }
    SetFamily::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::SpaceKind;
    use crate::systems::{build_system, Builder};

    fn d(text: &str) -> Exact {
        text.parse().unwrap()
    }

    fn line(xs: &[i128], map: Vec<usize>) -> FiniteSystem {
        let coords = xs.iter().map(|&x| vec![Exact::from_int(x), Exact::zero()]).collect();
        FiniteSystem::new(SpaceKind::Plane, coords, map).unwrap()
    }

    #[test]
    fn rejects_non_positive_delta() {
        let sys = line(&[0], vec![0]);
        assert!(matches!(build_chain_graph(&sys, Exact::zero()), Err(Error::Param(_))));
        assert!(matches!(build_chain_graph(&sys, d("-1/2^1")), Err(Error::Param(_))));
    }

    #[test]
    fn adjacency_matches_exact_scan() {
        let sys = build_system(Builder::Square { n: 4 }).unwrap().system;
        let delta = d("1/2^3");
        let g = build_chain_graph(&sys, delta).unwrap();
        for x in 0..sys.len() {
            let fx = sys.image(x).unwrap();
            let expect: Vec<usize> = (0..sys.len())
                .filter(|&y| sys.distance(fx, y).unwrap() < delta)
                .collect();
            assert_eq!(g.successors(x), expect.as_slice(), "point {x}");
        }
    }

    #[test]
    fn tiny_delta_is_the_map() {
        let sys = build_system(Builder::Square { n: 3 }).unwrap().system;
        let g = build_chain_graph(&sys, sys.min_gap().unwrap()).unwrap();
        assert_eq!(g.edge_count(), sys.len());
        for x in 0..sys.len() {
            assert_eq!(g.successors(x), &[sys.map()[x]]);
        }
        assert_eq!(g.chain_components(), cycles_of_map(&sys));
    }

    #[test]
    fn torus_fibers() {
        let sys = build_system(Builder::Torus { q: 5, p: 2 }).unwrap().system;
        let g = build_chain_graph(&sys, d("1/10")).unwrap();
        let comps = g.chain_components();
        assert_eq!(comps.len(), 5);
        assert_eq!(comps, cycles_of_map(&sys));
        for c in &comps {
            assert!(g.is_ict(c).unwrap());
        }
    }

    #[test]
    fn ict_examples() {
        let built = build_system(Builder::Square { n: 5 }).unwrap();
        let sys = &built.system;
        let g = build_chain_graph(sys, d("1/2^4")).unwrap();
        assert!(g.is_ict(built.landmark("Q")).unwrap());
        let one = Exact::from_int(1);
        let a = sys.find(&[one, one]).unwrap();
        let b = sys.find(&[-one, one]).unwrap();
        let g = build_chain_graph(sys, d("1/2^1")).unwrap();
        assert!(g.is_ict(&PointSet::singleton(a)).unwrap());
        assert!(!g.is_ict(&PointSet::new(vec![a, b])).unwrap());
        assert!(matches!(g.is_ict(&PointSet::default()), Err(Error::Empty(_))));
        assert_eq!(g.is_ict(&PointSet::singleton(10_000)), Err(Error::UnknownId(10_000)));
    }

    #[test]
    fn non_fixed_singleton_is_not_ict() {
        let sys = line(&[0, 8], vec![1, 0]);
        let g = build_chain_graph(&sys, d("1/2^0")).unwrap();
        assert!(!g.is_ict(&PointSet::singleton(0)).unwrap());
        assert!(g.is_ict(&PointSet::new(vec![0, 1])).unwrap());
    }

    #[test]
    fn enumeration_examples() {
        let three = line(&[0, 4, 8], vec![1, 2, 0]);
        let g = build_chain_graph(&three, d("1/2^0")).unwrap();
        assert_eq!(g.enumerate_ict(3).unwrap(), SetFamily::new(vec![PointSet::new(vec![0, 1, 2])]));

        let two = line(&[0, 1], vec![0, 1]);
        let g = build_chain_graph(&two, d("1/2^2")).unwrap();
        assert_eq!(
            g.enumerate_ict(2).unwrap(),
            SetFamily::new(vec![PointSet::singleton(0), PointSet::singleton(1)])
        );
        assert!(matches!(g.enumerate_ict(0), Err(Error::Param(_))));

        // Heights 0, 1 and 1/2 give three fibers of three points.
        let stack = build_system(Builder::CircleStack { n_max: 2, q: 3, p: 1 }).unwrap().system;
        let g = build_chain_graph(&stack, d("1/6")).unwrap();
        let found = g.enumerate_ict(3).unwrap();
        assert_eq!(found.len(), 3);
        assert_eq!(found, cycles_of_map(&stack));
    }

    #[test]
    fn enumeration_guard() {
        let sys = build_system(Builder::Torus { q: 5, p: 2 }).unwrap().system;
        let g = build_chain_graph(&sys, d("1/10")).unwrap();
        assert_eq!(g.enumerate_ict(2), Err(Error::Guard { points: 25, guard: ENUMERATION_GUARD }));
    }

    #[test]
    fn cycles() {
        let sys = build_system(Builder::IntervalSquare { k: 4 }).unwrap().system;
        assert_eq!(cycles_of_map(&sys), SetFamily::new(vec![PointSet::singleton(0), PointSet::singleton(16)]));
        let sys = build_system(Builder::Torus { q: 7, p: 3 }).unwrap().system;
        let cycles = cycles_of_map(&sys);
        assert_eq!(cycles.len(), 7);
        assert!(cycles.iter().all(|c| c.len() == 7));
    }

    #[test]
    fn shortest_paths_are_least() {
        let sys = line(&[0, 1, 2, 3], vec![1, 2, 3, 0]);
        let g = build_chain_graph(&sys, d("3/2^1")).unwrap();
        let all = vec![true; 4];
        assert_eq!(g.shortest_path_within(0, 0, &all), Some(vec![0, 0]));
        assert_eq!(g.shortest_path_within(0, 3, &all), Some(vec![0, 1, 3]));
        let mut no_one = all.clone();
        no_one[1] = false;
        assert_eq!(g.shortest_path_within(0, 3, &no_one), Some(vec![0, 2, 3]));
    }

    #[test]
    fn dot_export() {
        let sys = build_system(Builder::Torus { q: 5, p: 2 }).unwrap().system;
        let g = build_chain_graph(&sys, sys.min_gap().unwrap()).unwrap();
        let dot = g.to_dot();
        assert_eq!(dot.matches("->").count(), 25);
        assert_eq!(dot.matches("[label=").count(), 25);
    }
}
