//! Finite-resolution deciders for the shadowing variants and for the
//! properties P_e and P_a.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::chain_graph::{build_chain_graph, cycle_through, cycles_of_map, periodic_mask, ChainGraph};
use crate::dyadic::Exact;
use crate::error::{Error, Result};
use crate::metric::{PointSet, SetFamily};
use crate::systems::FiniteSystem;
use crate::trajectories::{closest_full_trajectory, full_trajectory_with, CodedOrbit};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
    TwoSided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitKind {
    Tols,
    DeltaRestrictedTols,
    GammaRestrictedTols,
    LimitShadowing,
    BackwardLimitShadowing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CofinalKind {
    CofinalOrbital,
    BackwardCofinalOrbital,
    TwoSidedCofinal,
    GammaRestrictedTwoSidedCofinal,
}

/// How cofinal checks compare a pseudo-orbit with a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formulation {
    /// Hausdorff distance between limit sets.
    LimitSet,
    /// Hausdorff distance between closures of decoded tails.
    TailSet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropertyKind {
    Pe,
    Pa,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
            Direction::TwoSided => "two_sided",
        })
    }
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitKind::Tols => "tols",
            LimitKind::DeltaRestrictedTols => "delta_restricted_tols",
            LimitKind::GammaRestrictedTols => "gamma_restricted_tols",
            LimitKind::LimitShadowing => "limit_shadowing",
            LimitKind::BackwardLimitShadowing => "backward_limit_shadowing",
        })
    }
}

impl fmt::Display for CofinalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CofinalKind::CofinalOrbital => "cofinal_orbital",
            CofinalKind::BackwardCofinalOrbital => "backward_cofinal_orbital",
            CofinalKind::TwoSidedCofinal => "two_sided_cofinal",
            CofinalKind::GammaRestrictedTwoSidedCofinal => "gamma_restricted_two_sided_cofinal",
        })
    }
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PropertyKind::Pe => "P_e",
            PropertyKind::Pa => "P_a",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A failing pseudo-orbit; `start` is the index of its first element.
    PseudoOrbit { start: i64, ids: Vec<usize> },
    /// A limit-set pair no trajectory matches, with the closest trajectory.
    Pair { lset: PointSet, rset: PointSet, closest: CodedOrbit, distance: Exact },
    /// A single set no trajectory matches, with the closest trajectory.
    Set { set: PointSet, closest: CodedOrbit, distance: Exact },
}

impl Witness {
    /// The `(lset, rset)` or `(set, set)` the witness is about.
    pub fn sets(&self) -> Option<(&PointSet, &PointSet)> {
        match self {
            Witness::PseudoOrbit { .. } => None,
            Witness::Pair { lset, rset, .. } => Some((lset, rset)),
            Witness::Set { set, .. } => Some((set, set)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub property: String,
    pub params: BTreeMap<String, String>,
    pub holds: bool,
    pub witness: Option<Witness>,
    pub examined_counts: BTreeMap<String, usize>,
}

impl Verdict {
    /// Key-sorted JSON document.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("verdicts serialize");
        serde_json::to_string_pretty(&value).expect("values serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariantParams {
    pub epsilon: Exact,
    pub delta: Exact,
    /// Limit-set tolerance, inclusive.
    pub tau: Exact,
    /// Replaces the default candidate family when set.
    pub family: Option<SetFamily>,
    /// Added to the default candidate family.
    pub extra_sets: Vec<PointSet>,
}

impl VariantParams {
    pub fn new(epsilon: Exact, delta: Exact) -> VariantParams {
        VariantParams { epsilon, delta, tau: Exact::zero(), family: None, extra_sets: Vec::new() }
    }

    pub fn with_tau(mut self, tau: Exact) -> VariantParams {
        self.tau = tau;
        self
    }

    pub fn with_family(mut self, family: SetFamily) -> VariantParams {
        self.family = Some(family);
        self
    }

    pub fn with_extra_sets(mut self, sets: Vec<PointSet>) -> VariantParams {
        self.extra_sets = sets;
        self
    }

    fn validate(&self) -> Result<()> {
        if !self.epsilon.is_positive() {
            return Err(Error::Param(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !self.delta.is_positive() {
            return Err(Error::Param(format!("delta must be positive, got {}", self.delta)));
        }
        if self.tau.is_negative() {
            return Err(Error::Param(format!("tau must be nonnegative, got {}", self.tau)));
        }
        Ok(())
    }

    fn record(&self, property: String) -> (String, BTreeMap<String, String>) {
        let mut params = BTreeMap::new();
        params.insert("delta".into(), self.delta.to_string());
        params.insert("epsilon".into(), self.epsilon.to_string());
        params.insert("tau".into(), self.tau.to_string());
        (property, params)
    }

    /// Chain components and map cycles at `delta`, plus the extra sets, or
    /// the explicit family.
    pub fn candidate_family(&self, g: &ChainGraph<'_>) -> Result<SetFamily> {
        let sys = g.system();
        let family = match &self.family {
            Some(f) => f.clone(),
            None => g
                .chain_components()
                .union(&cycles_of_map(sys))
                .union(&SetFamily::new(self.extra_sets.clone())),
        };
        if family.is_empty() {
            return Err(Error::Empty("candidate family is empty".into()));
        }
        for set in &family {
            sys.check_set(set)?;
        }
        Ok(family)
    }
}

fn validate_shadow(epsilon: Exact, delta: Exact, horizon: usize) -> Result<()> {
    if !epsilon.is_positive() || !delta.is_positive() {
        return Err(Error::Param(format!("epsilon and delta must be positive, got {epsilon} and {delta}")));
    }
    if horizon == 0 {
        return Err(Error::Param("horizon must be at least 1".into()));
    }
    Ok(())
}

/// Window layout for a direction: index of the first element and number of steps.
fn window(direction: Direction, horizon: usize) -> (i64, usize) {
    match direction {
        Direction::Forward => (0, horizon),
        Direction::Backward => (-(horizon as i64), horizon),
        Direction::TwoSided => (-(horizon as i64), 2 * horizon),
    }
}

/// Decides whether every δ-pseudo-orbit window is ε-shadowed.
///
/// Forward windows are `[0, L]` and are shadowed by any orbit. Backward
/// windows `[-L, 0]` and two-sided windows `[-L, L]` must start at a point
/// with an infinite backward δ-chain, and are shadowed by backward or full
/// trajectories, which in a finite space run along cycles.
///
/// The search tracks, per window prefix, the set of shadow positions still
/// within ε; a prefix fails when that set empties. Levels are expanded in
/// lexicographic order, so the witness is the least failing prefix of
/// minimal length.
pub fn check_shadowing(
    sys: &FiniteSystem,
    direction: Direction,
    epsilon: Exact,
    delta: Exact,
    horizon: usize,
) -> Result<Verdict> {
    validate_shadow(epsilon, delta, horizon)?;
    let g = build_chain_graph(sys, delta)?;
    let n = sys.len();
    let eps = sys.embedding().strict_bound(epsilon);
    let (start, steps) = window(direction, horizon);
    let (starts, shadows): (Vec<bool>, Vec<bool>) = match direction {
        Direction::Forward => (vec![true; n], vec![true; n]),
        _ => (g.reachable_from(&PointSet::new(recurrent_ids(&g))), periodic_mask(sys)),
    };
    let near = |x: usize, pool: &mut dyn Iterator<Item = usize>| -> Vec<usize> {
        let mut v: Vec<usize> = pool.filter(|&w| sys.dist_units(w, x) < eps).collect();
        v.sort_unstable();
        v.dedup();
        v
    };

    let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::new();
    let mut level: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for x in (0..n).filter(|&x| starts[x]) {
        let viable = near(x, &mut (0..n).filter(|&w| shadows[w]));
        if viable.is_empty() {
            return Ok(shadow_verdict(direction, epsilon, delta, horizon, Some((start, vec![x])), seen.len()));
        }
        if seen.insert((x, viable.clone())) {
            level.push((vec![x], viable));
        }
    }
    for _ in 0..steps {
        let mut next = Vec::new();
        for (path, viable) in &level {
            let x = *path.last().expect("paths are nonempty");
            for &y in g.successors(x) {
                let moved = near(y, &mut viable.iter().map(|&w| sys.map()[w]));
                let mut extended = path.clone();
                extended.push(y);
                if moved.is_empty() {
                    return Ok(shadow_verdict(direction, epsilon, delta, horizon, Some((start, extended)), seen.len()));
                }
                if seen.insert((y, moved.clone())) {
                    next.push((extended, moved));
                }
            }
        }
        level = next;
    }
    Ok(shadow_verdict(direction, epsilon, delta, horizon, None, seen.len()))
}

fn recurrent_ids(g: &ChainGraph<'_>) -> Vec<usize> {
    g.chain_recurrent()
        .iter()
        .enumerate()
        .filter(|(_, &r)| r)
        .map(|(id, _)| id)
        .collect()
}

fn shadow_verdict(
    direction: Direction,
    epsilon: Exact,
    delta: Exact,
    horizon: usize,
    failure: Option<(i64, Vec<usize>)>,
    states: usize,
) -> Verdict {
    let mut params = BTreeMap::new();
    params.insert("delta".into(), delta.to_string());
    params.insert("direction".into(), direction.to_string());
    params.insert("epsilon".into(), epsilon.to_string());
    params.insert("horizon".into(), horizon.to_string());
    let mut counts = BTreeMap::new();
    counts.insert("states".into(), states);
    Verdict {
        property: format!("{direction}_shadowing"),
        params,
        holds: failure.is_none(),
        witness: failure.map(|(start, ids)| Witness::PseudoOrbit { start, ids }),
        examined_counts: counts,
    }
}

/// Exhaustive check of every pseudo-orbit window, one sequence at a time,
/// carrying the explicit list of shadowing start points. Exponential; for
/// cross-checking [`check_shadowing`] on small systems.
pub fn shadowing_oracle(
    sys: &FiniteSystem,
    direction: Direction,
    epsilon: Exact,
    delta: Exact,
    horizon: usize,
) -> Result<(bool, Option<Vec<usize>>)> {
    validate_shadow(epsilon, delta, horizon)?;
    let n = sys.len();
    let map = sys.map();
    let close = |a: usize, b: usize| sys.distance(a, b).expect("ids are valid") < epsilon;
    let step_ok = |x: usize, y: usize| sys.distance(map[x], y).expect("ids are valid") < delta;
    let (candidates, starts): (Vec<usize>, Vec<usize>) = match direction {
        Direction::Forward => ((0..n).collect(), (0..n).collect()),
        _ => {
            let periodic = (0..n)
                .filter(|&z| {
                    let mut y = map[z];
                    for _ in 0..n {
                        if y == z {
                            return true;
                        }
                        y = map[y];
                    }
                    false
                })
                .collect();
            // A point has an infinite backward chain iff it ends one of length n.
            let mut ends = vec![true; n];
            for _ in 0..n {
                ends = (0..n).map(|y| (0..n).any(|x| ends[x] && step_ok(x, y))).collect();
            }
            (periodic, (0..n).filter(|&y| ends[y]).collect())
        }
    };
    let (_, steps) = window(direction, horizon);

    struct Search<'s> {
        n: usize,
        map: &'s [usize],
        close: &'s dyn Fn(usize, usize) -> bool,
        step_ok: &'s dyn Fn(usize, usize) -> bool,
        /// States known to yield no witness within the recorded number of steps.
        dead: HashMap<(usize, Vec<(usize, usize)>), usize>,
    }
    impl Search<'_> {
        /// Depth-first over chains of exactly `target` steps; subtrees whose
        /// prefix already failed were reported at a shorter length.
        fn dfs(&mut self, path: &mut Vec<usize>, alive: &[(usize, usize)], target: usize) -> Option<Vec<usize>> {
            let remaining = target + 1 - path.len();
            if remaining == 0 {
                return None;
            }
            let x = *path.last().unwrap();
            let key = (x, alive.to_vec());
            if self.dead.get(&key).is_some_and(|&r| r >= remaining) {
                return None;
            }
            for y in 0..self.n {
                if !(self.step_ok)(x, y) {
                    continue;
                }
                // Each candidate is (start point, current image).
                let next: Vec<(usize, usize)> = alive
                    .iter()
                    .map(|&(z, w)| (z, self.map[w]))
                    .filter(|&(_, w)| (self.close)(w, y))
                    .collect();
                path.push(y);
                if next.is_empty() {
                    if path.len() == target + 1 {
                        return Some(path.clone());
                    }
                } else if let Some(found) = self.dfs(path, &next, target) {
                    return Some(found);
                }
                path.pop();
            }
            self.dead.insert(key, remaining);
            None
        }
    }
    let mut search = Search { n, map, close: &close, step_ok: &step_ok, dead: HashMap::new() };
    for &x in &starts {
        if !candidates.iter().any(|&z| close(z, x)) {
            return Ok((false, Some(vec![x])));
        }
    }
    for target in 1..=steps {
        search.dead.clear();
        for &x in &starts {
            let alive: Vec<(usize, usize)> = candidates.iter().filter(|&&z| close(z, x)).map(|&z| (z, z)).collect();
            let mut path = vec![x];
            if let Some(found) = search.dfs(&mut path, &alive, target) {
                return Ok((false, Some(found)));
            }
        }
    }
    Ok((true, None))
}

/// Hausdorff distances from every map cycle to every candidate, plus the
/// cycle pairs joined by an exact trajectory.
struct CycleTable {
    cycles: Vec<PointSet>,
    family: Vec<PointSet>,
    /// `dist[c][a]` in embedding units.
    dist: Vec<Vec<i128>>,
    links: Vec<(usize, usize)>,
}

impl CycleTable {
    fn new(sys: &FiniteSystem, family: &SetFamily) -> Result<CycleTable> {
        let cycles: Vec<PointSet> = cycles_of_map(sys).sets().to_vec();
        let family: Vec<PointSet> = family.sets().to_vec();
        let dist = cycles
            .iter()
            .map(|c| family.iter().map(|a| sys.hausdorff_units(c, a)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut cycle_of = vec![usize::MAX; sys.len()];
        for (ci, c) in cycles.iter().enumerate() {
            for &id in c.ids() {
                cycle_of[id] = ci;
            }
        }
        let mut links = Vec::new();
        for (ci, c) in cycles.iter().enumerate() {
            let mut hit = vec![false; cycles.len()];
            let mut y = c.ids()[0];
            for _ in 0..sys.len() {
                hit[cycle_of[y]] = true;
                y = sys.map()[y];
            }
            links.extend(hit.iter().enumerate().filter(|(_, &h)| h).map(|(cj, _)| (ci, cj)));
        }
        Ok(CycleTable { cycles, family, dist, links })
    }

    /// Least `max(d_H(C1, L), d_H(C2, R))` over linked cycle pairs, with the pair.
    fn best(&self, l: usize, r: usize) -> (i128, usize, usize) {
        self.links
            .iter()
            .map(|&(c1, c2)| (self.dist[c1][l].max(self.dist[c2][r]), c1, c2))
            .min()
            .expect("a finite map has a cycle")
    }

    fn orbit(&self, sys: &FiniteSystem, c1: usize, c2: usize) -> Result<CodedOrbit> {
        let start = self.cycles[c1].ids()[0];
        let target = &self.cycles[c2];
        let mut core = Vec::new();
        let mut y = start;
        while !target.contains(y) {
            core.push(y);
            y = sys.map()[y];
        }
        CodedOrbit::from_parts(sys, cycle_through(sys, start), vec![], core, vec![], cycle_through(sys, y))
    }
}

/// Candidates that pass the ICT test at the chain graph's delta.
fn ict_members(g: &ChainGraph<'_>, family: &SetFamily) -> Result<SetFamily> {
    let mut out = Vec::new();
    for set in family {
        if g.is_ict(set)? {
            out.push(set.clone());
        }
    }
    Ok(SetFamily::new(out))
}

fn base_counts(family: &SetFamily, members: &SetFamily) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    counts.insert("candidates".into(), family.len());
    counts.insert("ict_candidates".into(), members.len());
    counts
}

/// Orbital limit shadowing variants over coded pseudo-orbits whose limit sets
/// are drawn from the candidate family.
///
/// A pair matches when some exact full trajectory has limit sets within
/// `tau` (inclusive) of the pair. Unrestricted `tols` admits every pair, the
/// δ-restricted variant needs the right set δ-chain reachable from the left,
/// and the γ-restricted variant only considers equal sets. The one-sided
/// limit variants ask for an exact cycle tracking the woven tour of a set
/// within `tau` at every index, up to a shift.
pub fn check_limit_variant(sys: &FiniteSystem, kind: LimitKind, params: &VariantParams) -> Result<Verdict> {
    params.validate()?;
    let g = build_chain_graph(sys, params.delta)?;
    let family = params.candidate_family(&g)?;
    let members = ict_members(&g, &family)?;
    let (property, params_map) = params.record(kind.to_string());
    let mut counts = base_counts(&family, &members);
    let tau = sys.embedding().inclusive_bound(params.tau);

    if matches!(kind, LimitKind::LimitShadowing | LimitKind::BackwardLimitShadowing) {
        let cycles = cycles_of_map(sys);
        counts.insert("cycles".into(), cycles.len());
        for set in &members {
            let tour = crate::trajectories::weave_pseudo_orbit(&g, set)?.right_cycle;
            let (best, cycle) = cycles
                .iter()
                .map(|c| (tracking_error(sys, &tour, &cycle_through(sys, c.ids()[0])), c))
                .min_by_key(|(d, _)| *d)
                .expect("a finite map has a cycle");
            if best > tau {
                let closest = CodedOrbit::periodic(sys, cycle_through(sys, cycle.ids()[0]))?;
                let distance = sys.embedding().to_exact(best);
                return Ok(Verdict {
                    property,
                    params: params_map,
                    holds: false,
                    witness: Some(Witness::Set { set: set.clone(), closest, distance }),
                    examined_counts: counts,
                });
            }
        }
        return Ok(Verdict { property, params: params_map, holds: true, witness: None, examined_counts: counts });
    }

    let table = CycleTable::new(sys, &members)?;
    let m = table.family.len();
    let reach: Vec<Vec<bool>> = if kind == LimitKind::DeltaRestrictedTols {
        table.family.iter().map(|l| g.reachable_from(l)).collect()
    } else {
        Vec::new()
    };
    let mut pairs = 0;
    for l in 0..m {
        for r in 0..m {
            let admissible = match kind {
                LimitKind::Tols => true,
                LimitKind::DeltaRestrictedTols => table.family[r].ids().iter().any(|&id| reach[l][id]),
                _ => l == r,
            };
            if !admissible {
                continue;
            }
            pairs += 1;
            let (best, c1, c2) = table.best(l, r);
            if best > tau {
                counts.insert("pairs".into(), pairs);
                return Ok(Verdict {
                    property,
                    params: params_map,
                    holds: false,
                    witness: Some(Witness::Pair {
                        lset: table.family[l].clone(),
                        rset: table.family[r].clone(),
                        closest: table.orbit(sys, c1, c2)?,
                        distance: sys.embedding().to_exact(best),
                    }),
                    examined_counts: counts,
                });
            }
        }
    }
    counts.insert("pairs".into(), pairs);
    Ok(Verdict { property, params: params_map, holds: true, witness: None, examined_counts: counts })
}

/// Least over shifts of the largest pointwise distance between the periodic
/// sequences `tour` and `cycle`.
fn tracking_error(sys: &FiniteSystem, tour: &[usize], cycle: &[usize]) -> i128 {
    let period = num_integer::lcm(tour.len(), cycle.len());
    (0..cycle.len())
        .map(|shift| {
            (0..period)
                .map(|i| sys.dist_units(tour[i % tour.len()], cycle[(i + shift) % cycle.len()]))
                .max()
                .unwrap_or(0)
        })
        .min()
        .unwrap_or(0)
}

/// Cofinal orbital shadowing variants.
///
/// Every jump of the pseudo-orbit is below δ, so a two-sided pair needs its
/// right set δ-chain reachable from its left set; the γ-restricted variant
/// also needs the two sets within ε of each other. A pair matches when some
/// exact trajectory comes within ε (strict) on each side. One-sided variants
/// look only at the forward or backward limit set.
pub fn check_cofinal_variant(sys: &FiniteSystem, kind: CofinalKind, params: &VariantParams) -> Result<Verdict> {
    check_cofinal_with(sys, kind, params, Formulation::LimitSet)
}

pub fn check_cofinal_with(
    sys: &FiniteSystem,
    kind: CofinalKind,
    params: &VariantParams,
    formulation: Formulation,
) -> Result<Verdict> {
    params.validate()?;
    let g = build_chain_graph(sys, params.delta)?;
    let family = params.candidate_family(&g)?;
    let members = ict_members(&g, &family)?;
    let (property, mut params_map) = params.record(kind.to_string());
    params_map.insert(
        "formulation".into(),
        match formulation {
            Formulation::LimitSet => "limit_set".into(),
            Formulation::TailSet => "tail_set".into(),
        },
    );
    let mut counts = base_counts(&family, &members);
    let eps = sys.embedding().strict_bound(params.epsilon);
    let sets = members.sets();

    let pairs: Vec<(usize, usize)> = match kind {
        CofinalKind::CofinalOrbital | CofinalKind::BackwardCofinalOrbital => (0..sets.len()).map(|i| (i, i)).collect(),
        CofinalKind::TwoSidedCofinal | CofinalKind::GammaRestrictedTwoSidedCofinal => {
            let mut out = Vec::new();
            for (l, lset) in sets.iter().enumerate() {
                let reach = g.reachable_from(lset);
                for (r, rset) in sets.iter().enumerate() {
                    if rset.ids().iter().any(|&id| reach[id]) {
                        out.push((l, r));
                    }
                }
            }
            out
        }
    };
    let sides = match kind {
        CofinalKind::CofinalOrbital => (false, true),
        CofinalKind::BackwardCofinalOrbital => (true, false),
        _ => (true, true),
    };
    let gamma = kind == CofinalKind::GammaRestrictedTwoSidedCofinal;

    let outcome = match formulation {
        Formulation::LimitSet => cofinal_limit_sets(sys, &members, &pairs, sides, gamma, eps, &mut counts)?,
        Formulation::TailSet => cofinal_tail_sets(sys, &members, &pairs, sides, gamma, eps, &mut counts)?,
    };
    let witness = match outcome {
        None => None,
        Some((l, r, closest, units)) => {
            let distance = sys.embedding().to_exact(units);
            Some(if sides == (true, true) {
                Witness::Pair { lset: sets[l].clone(), rset: sets[r].clone(), closest, distance }
            } else {
                Witness::Set { set: sets[l].clone(), closest, distance }
            })
        }
    };
    Ok(Verdict { property, params: params_map, holds: witness.is_none(), witness, examined_counts: counts })
}

type CofinalFailure = Option<(usize, usize, CodedOrbit, i128)>;

fn cofinal_limit_sets(
    sys: &FiniteSystem,
    members: &SetFamily,
    pairs: &[(usize, usize)],
    sides: (bool, bool),
    gamma: bool,
    eps: i128,
    counts: &mut BTreeMap<String, usize>,
) -> Result<CofinalFailure> {
    let table = CycleTable::new(sys, members)?;
    counts.insert("cycles".into(), table.cycles.len());
    let mut examined = 0;
    for &(l, r) in pairs {
        if gamma && sys.hausdorff_units(&table.family[l], &table.family[r])? >= eps {
            continue;
        }
        examined += 1;
        let (best, c1, c2) = table
            .links
            .iter()
            .map(|&(c1, c2)| {
                let left = if sides.0 { table.dist[c1][l] } else { 0 };
                let right = if sides.1 { table.dist[c2][r] } else { 0 };
                (left.max(right), c1, c2)
            })
            .min()
            .expect("a finite map has a cycle");
        if best >= eps {
            counts.insert("pairs".into(), examined);
            return Ok(Some((l, r, table.orbit(sys, c1, c2)?, best)));
        }
    }
    counts.insert("pairs".into(), examined);
    Ok(None)
}

/// Tail closures of an eventually periodic sequence, read off a decoded
/// window once both ends have settled.
fn tail_sets(orbit: &CodedOrbit) -> (PointSet, PointSet) {
    let settle = (orbit.left_tail.len() + orbit.core.len() + orbit.right_tail.len()) as i64 + 1;
    let back = orbit.left_cycle.len() as i64;
    let fwd = orbit.right_cycle.len() as i64;
    (
        PointSet::new(orbit.window(-settle - back + 1, -settle)),
        PointSet::new(orbit.window(settle, settle + fwd - 1)),
    )
}

fn cofinal_tail_sets(
    sys: &FiniteSystem,
    members: &SetFamily,
    pairs: &[(usize, usize)],
    sides: (bool, bool),
    gamma: bool,
    eps: i128,
    counts: &mut BTreeMap<String, usize>,
) -> Result<CofinalFailure> {
    // Exact full trajectories of a finite system run along single cycles.
    let trajectories = cycles_of_map(sys)
        .iter()
        .map(|c| CodedOrbit::periodic(sys, cycle_through(sys, c.ids()[0])))
        .collect::<Result<Vec<_>>>()?;
    let z_tails: Vec<(PointSet, PointSet)> = trajectories.iter().map(tail_sets).collect();
    counts.insert("cycles".into(), trajectories.len());
    let mut cache: HashMap<(PointSet, PointSet), i128> = HashMap::new();
    let mut dh = |a: &PointSet, b: &PointSet| -> Result<i128> {
        if let Some(&v) = cache.get(&(a.clone(), b.clone())) {
            return Ok(v);
        }
        let v = sys.hausdorff_units(a, b)?;
        cache.insert((a.clone(), b.clone()), v);
        Ok(v)
    };
    let sets = members.sets();
    let mut examined = 0;
    for &(l, r) in pairs {
        let x = CodedOrbit::from_parts(sys, sets[l].ids().to_vec(), vec![], vec![], vec![], sets[r].ids().to_vec())?;
        let (x_back, x_fwd) = tail_sets(&x);
        if gamma && dh(&x_back, &x_fwd)? >= eps {
            continue;
        }
        examined += 1;
        let mut best: Option<(i128, usize)> = None;
        for (zi, (z_back, z_fwd)) in z_tails.iter().enumerate() {
            let left = if sides.0 { dh(z_back, &x_back)? } else { 0 };
            let right = if sides.1 { dh(z_fwd, &x_fwd)? } else { 0 };
            let d = left.max(right);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, zi));
            }
        }
        let (d, zi) = best.expect("a finite map has a cycle");
        if d >= eps {
            counts.insert("pairs".into(), examined);
            return Ok(Some((l, r, trajectories[zi].clone(), d)));
        }
    }
    counts.insert("pairs".into(), examined);
    Ok(None)
}

/// P_e: every ICT candidate is both limit sets of one exact full trajectory.
/// P_a: every ICT candidate is within ε (strict) of both limit sets of one.
pub fn check_property(sys: &FiniteSystem, which: PropertyKind, params: &VariantParams) -> Result<Verdict> {
    params.validate()?;
    let g = build_chain_graph(sys, params.delta)?;
    let family = params.candidate_family(&g)?;
    let members = ict_members(&g, &family)?;
    let (property, params_map) = params.record(which.to_string());
    let counts = base_counts(&family, &members);
    for set in &members {
        let matched = match which {
            PropertyKind::Pe => full_trajectory_with(sys, set, set, Exact::zero())?.is_some(),
            PropertyKind::Pa => closest_full_trajectory(sys, set, set)?.1 < params.epsilon,
        };
        if !matched {
            let (closest, distance) = closest_full_trajectory(sys, set, set)?;
            return Ok(Verdict {
                property,
                params: params_map,
                holds: false,
                witness: Some(Witness::Set { set: set.clone(), closest, distance }),
                examined_counts: counts,
            });
        }
    }
    Ok(Verdict { property, params: params_map, holds: true, witness: None, examined_counts: counts })
}
