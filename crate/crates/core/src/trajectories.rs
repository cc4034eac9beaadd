//! Eventually periodic two-sided sequences and exact limit sets.
//!
//! In a finite space a sequence whose step errors tend to zero is eventually
//! exact in both directions, so it is determined by a backward period, a
//! finite middle, and a forward period.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::chain_graph::{cycle_through, cycles_of_map, periodic_mask, ChainGraph};
use crate::dyadic::Exact;
use crate::error::{Error, Result};
use crate::metric::{PointSet, SetFamily};
use crate::systems::FiniteSystem;

/// `... left_cycle left_cycle left_tail | core right_tail right_cycle right_cycle ...`
/// with `core[0]` at index 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CodedOrbit {
    pub left_cycle: Vec<usize>,
    pub left_tail: Vec<usize>,
    pub core: Vec<usize>,
    pub right_tail: Vec<usize>,
    pub right_cycle: Vec<usize>,
    pub jump_bound: Exact,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitPair {
    pub alpha_set: PointSet,
    pub omega_set: PointSet,
}

fn primitive(cycle: Vec<usize>) -> Vec<usize> {
    let n = cycle.len();
    for p in 1..n {
        if n.is_multiple_of(p) && (p..n).all(|i| cycle[i] == cycle[i - p]) {
            return cycle[..p].to_vec();
        }
    }
    cycle
}

impl CodedOrbit {
    /// Builds an orbit, reducing both cycles to their primitive period and
    /// computing the jump bound.
    pub fn from_parts(
        sys: &FiniteSystem,
        left_cycle: Vec<usize>,
        left_tail: Vec<usize>,
        core: Vec<usize>,
        right_tail: Vec<usize>,
        right_cycle: Vec<usize>,
    ) -> Result<CodedOrbit> {
        if left_cycle.is_empty() || right_cycle.is_empty() {
            return Err(Error::Empty("orbit cycles must be nonempty".into()));
        }
        let mut orbit = CodedOrbit {
            left_cycle: primitive(left_cycle),
            left_tail,
            core,
            right_tail,
            right_cycle: primitive(right_cycle),
            jump_bound: Exact::zero(),
        };
        for &id in orbit.ids() {
            sys.check_id(id)?;
        }
        orbit.jump_bound = orbit.measure_jumps(sys);
        Ok(orbit)
    }

    /// Constant orbit along a single exact cycle.
    pub fn periodic(sys: &FiniteSystem, cycle: Vec<usize>) -> Result<CodedOrbit> {
        CodedOrbit::from_parts(sys, cycle.clone(), vec![], vec![], vec![], cycle)
    }

    fn ids(&self) -> impl Iterator<Item = &usize> {
        self.left_cycle
            .iter()
            .chain(&self.left_tail)
            .chain(&self.core)
            .chain(&self.right_tail)
            .chain(&self.right_cycle)
    }

    /// Index range that contains every distinct step of the sequence.
    fn span(&self) -> (i64, i64) {
        let lo = -((self.left_tail.len() + 2 * self.left_cycle.len()) as i64);
        let hi = (self.core.len() + self.right_tail.len() + 2 * self.right_cycle.len()) as i64;
        (lo, hi)
    }

    fn measure_jumps(&self, sys: &FiniteSystem) -> Exact {
        let (lo, hi) = self.span();
        let window = self.window(lo, hi);
        let worst = window
            .windows(2)
            .map(|w| sys.dist_units(sys.map()[w[0]], w[1]))
            .max()
            .unwrap_or(0);
        sys.embedding().to_exact(worst)
    }

    /// Checks ids and that the stored jump bound is the true maximum step error.
    pub fn verify(&self, sys: &FiniteSystem) -> Result<()> {
        if self.left_cycle.is_empty() || self.right_cycle.is_empty() {
            return Err(Error::Empty("orbit cycles must be nonempty".into()));
        }
        for &id in self.ids() {
            sys.check_id(id)?;
        }
        let actual = self.measure_jumps(sys);
        if actual != self.jump_bound {
            return Err(Error::Precondition(format!(
                "stated jump bound {} but the largest step error is {actual}",
                self.jump_bound
            )));
        }
        Ok(())
    }

    /// The element at index `i`.
    pub fn at(&self, i: i64) -> usize {
        let lt = self.left_tail.len() as i64;
        let c = self.core.len() as i64;
        let rt = self.right_tail.len() as i64;
        if i < -lt {
            let back = (-lt - i - 1) as usize % self.left_cycle.len();
            self.left_cycle[self.left_cycle.len() - 1 - back]
        } else if i < 0 {
            self.left_tail[(i + lt) as usize]
        } else if i < c {
            self.core[i as usize]
        } else if i < c + rt {
            self.right_tail[(i - c) as usize]
        } else {
            self.right_cycle[(i - c - rt) as usize % self.right_cycle.len()]
        }
    }

    /// Elements at indices `lo..=hi`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<usize> {
        (lo..=hi).map(|i| self.at(i)).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.jump_bound.is_zero()
    }

    pub fn limit_pair(&self) -> LimitPair {
        LimitPair {
            alpha_set: PointSet::new(self.left_cycle.clone()),
            omega_set: PointSet::new(self.right_cycle.clone()),
        }
    }

    /// Every point the sequence visits.
    pub fn support(&self) -> PointSet {
        PointSet::new(self.ids().copied().collect())
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, ids: &[usize]) -> fmt::Result {
    f.write_str("[")?;
    for (i, id) in ids.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{id}")?;
    }
    f.write_str("]")
}

impl fmt::Display for CodedOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for list in [&self.left_cycle, &self.left_tail, &self.core, &self.right_tail, &self.right_cycle] {
            write_list(f, list)?;
            f.write_str(" ")?;
        }
        write!(f, "{}", self.jump_bound)
    }
}

fn orbit_error(reason: impl Into<String>) -> Error {
    Error::Parse { line: 1, reason: reason.into() }
}

fn parse_list(tok: &str) -> Result<Vec<usize>> {
    let inner = tok
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| orbit_error(format!("expected a bracketed id list, got {tok:?}")))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) || (t.len() > 1 && t.starts_with('0')) {
                return Err(orbit_error(format!("invalid id {t:?}")));
            }
            t.parse().map_err(|_| orbit_error(format!("id {t:?} out of range")))
        })
        .collect()
}

/// Parses the text form. The result is structural only; use
/// [`CodedOrbit::verify`] to check it against a system.
impl FromStr for CodedOrbit {
    type Err = Error;

    fn from_str(s: &str) -> Result<CodedOrbit> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.len() != 6 {
            return Err(orbit_error(format!("expected five id lists and a jump bound, got {} tokens", toks.len())));
        }
        let lists = toks[..5].iter().map(|t| parse_list(t)).collect::<Result<Vec<_>>>()?;
        let jump_bound: Exact = toks[5].parse().map_err(|e: Error| orbit_error(e.to_string()))?;
        if jump_bound.is_negative() {
            return Err(orbit_error("jump bound must be nonnegative"));
        }
        if lists[0].is_empty() || lists[4].is_empty() {
            return Err(orbit_error("orbit cycles must be nonempty"));
        }
        let mut it = lists.into_iter();
        Ok(CodedOrbit {
            left_cycle: it.next().unwrap(),
            left_tail: it.next().unwrap(),
            core: it.next().unwrap(),
            right_tail: it.next().unwrap(),
            right_cycle: it.next().unwrap(),
            jump_bound,
        })
    }
}

/// Forward orbit of a point as a preperiodic tail and a cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSuffix {
    pub tail: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl OrbitSuffix {
    /// `f^i(x)`.
    pub fn at(&self, i: usize) -> usize {
        if i < self.tail.len() {
            self.tail[i]
        } else {
            self.cycle[(i - self.tail.len()) % self.cycle.len()]
        }
    }
}

pub fn forward_orbit(sys: &FiniteSystem, x: usize) -> Result<OrbitSuffix> {
    sys.check_id(x)?;
    let mut first_seen = vec![usize::MAX; sys.len()];
    let mut seq = Vec::new();
    let mut y = x;
    while first_seen[y] == usize::MAX {
        first_seen[y] = seq.len();
        seq.push(y);
        y = sys.map()[y];
    }
    let cycle = seq.split_off(first_seen[y]);
    Ok(OrbitSuffix { tail: seq, cycle })
}

pub fn omega_limit(sys: &FiniteSystem, x: usize) -> Result<PointSet> {
    Ok(PointSet::new(forward_orbit(sys, x)?.cycle))
}

/// The α-limit sets of all backward trajectories ending at `x`: the cycles
/// from which `x` is forward reachable.
pub fn alpha_family(sys: &FiniteSystem, x: usize) -> Result<SetFamily> {
    sys.check_id(x)?;
    let periodic = periodic_mask(sys);
    let mut seen = vec![false; sys.len()];
    seen[x] = true;
    let mut stack = vec![x];
    let mut sources = Vec::new();
    while let Some(y) = stack.pop() {
        if periodic[y] {
            sources.push(PointSet::new(cycle_through(sys, y)));
        }
        for &z in sys.preimage_ids(y) {
            if !seen[z] {
                seen[z] = true;
                stack.push(z);
            }
        }
    }
    Ok(SetFamily::new(sources))
}

/// Points `y` of `ω(x)` with `f^n(y) = x` for infinitely many `n`.
pub fn gamma_limit(sys: &FiniteSystem, x: usize) -> Result<PointSet> {
    let omega = omega_limit(sys, x)?;
    let hits = omega
        .ids()
        .iter()
        .copied()
        .filter(|&y| forward_orbit(sys, y).map(|o| o.cycle.contains(&x)).unwrap_or(false))
        .collect();
    Ok(PointSet::new(hits))
}

/// Cycle pairs `(C1, C2)` with `C2` forward reachable from `C1`, in canonical order.
fn reachable_cycle_pairs(sys: &FiniteSystem) -> Vec<(PointSet, PointSet)> {
    let cycles = cycles_of_map(sys);
    let mut pairs = Vec::new();
    for c1 in &cycles {
        let reach = omega_limit(sys, c1.ids()[0]).expect("cycle ids are valid");
        for c2 in &cycles {
            if c2.ids().iter().any(|&id| reach.contains(id)) {
                pairs.push((c1.clone(), c2.clone()));
            }
        }
    }
    pairs
}

/// Exact full trajectory from the cycle `c1` into the cycle `c2`.
fn trajectory_between(sys: &FiniteSystem, c1: &PointSet, c2: &PointSet) -> Result<CodedOrbit> {
    let start = c1.ids()[0];
    let mut core = Vec::new();
    let mut y = start;
    while !c2.contains(y) {
        core.push(y);
        y = sys.map()[y];
    }
    CodedOrbit::from_parts(sys, cycle_through(sys, start), vec![], core, vec![], cycle_through(sys, y))
}

/// First exact full trajectory (in canonical cycle-pair order) whose α-limit
/// is within `tau` of `a` and whose ω-limit is within `tau` of `b`.
pub fn full_trajectory_with(sys: &FiniteSystem, a: &PointSet, b: &PointSet, tau: Exact) -> Result<Option<CodedOrbit>> {
    if tau.is_negative() {
        return Err(Error::Param(format!("tau must be nonnegative, got {tau}")));
    }
    sys.check_set(a)?;
    sys.check_set(b)?;
    let bound = sys.embedding().inclusive_bound(tau);
    for (c1, c2) in reachable_cycle_pairs(sys) {
        if sys.hausdorff_units(&c1, a)? <= bound && sys.hausdorff_units(&c2, b)? <= bound {
            return trajectory_between(sys, &c1, &c2).map(Some);
        }
    }
    Ok(None)
}

/// The exact full trajectory minimizing `max(d_H(α, a), d_H(ω, b))`, with that distance.
pub fn closest_full_trajectory(sys: &FiniteSystem, a: &PointSet, b: &PointSet) -> Result<(CodedOrbit, Exact)> {
    sys.check_set(a)?;
    sys.check_set(b)?;
    let mut best: Option<(i128, PointSet, PointSet)> = None;
    for (c1, c2) in reachable_cycle_pairs(sys) {
        let d = sys.hausdorff_units(&c1, a)?.max(sys.hausdorff_units(&c2, b)?);
        if best.as_ref().is_none_or(|(bd, _, _)| d < *bd) {
            best = Some((d, c1, c2));
        }
    }
    let (d, c1, c2) = best.expect("a finite map has a cycle");
    Ok((trajectory_between(sys, &c1, &c2)?, sys.embedding().to_exact(d)))
}

/// A two-sided pseudo-orbit inside `a` whose backward and forward periods
/// are one closed chain tour through every point of `a` in id order.
pub fn weave_pseudo_orbit(g: &ChainGraph<'_>, a: &PointSet) -> Result<CodedOrbit> {
    let sys = g.system();
    sys.check_set(a)?;
    let mut inside = vec![false; sys.len()];
    for &id in a.ids() {
        inside[id] = true;
    }
    let ids = a.ids();
    let mut tour = vec![ids[0]];
    for (i, &from) in ids.iter().enumerate() {
        let to = ids[(i + 1) % ids.len()];
        let path = g.shortest_path_within(from, to, &inside).ok_or_else(|| {
            Error::Precondition(format!(
                "{a} is not internally chain transitive at delta {}: no chain from {from} to {to}",
                g.delta()
            ))
        })?;
        tour.extend_from_slice(&path[1..]);
    }
    tour.pop();
    CodedOrbit::from_parts(sys, tour.clone(), vec![], vec![], vec![], tour)
}
