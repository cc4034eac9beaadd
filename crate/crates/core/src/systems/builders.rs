//! Finite truncations of the example systems.
//!
//! Countable constructions are cut at a level `N`. A point whose image would
//! need an index beyond the truncation maps to itself, so the map stays total
//! without inventing points. Because of that the truncated square system is
//! not injective even though the untruncated construction is a homeomorphism.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;

use super::FiniteSystem;
use crate::dyadic::{Dyadic, Exact};
use crate::error::{Error, Result};
use crate::metric::{PointSet, SpaceKind};

/// A builder name with its truncation parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builder {
    /// Spiral square system at level `n`.
    Square { n: u32 },
    /// Circles at heights `{0} ∪ {1/i : 1 ≤ i ≤ n_max}` rotated by `p/q`.
    CircleStack { n_max: u32, q: u64, p: u64 },
    /// `q × q` torus grid rotated by `p/q` in the first coordinate.
    Torus { q: u64, p: u64 },
    /// The boundary square plus periodic outer rings `R_1..R_n`.
    PeriodicCofinal { n: u32 },
    /// Nested squares with `k` spiral rings in each connecting gap; sides of depth `m`.
    SquareSequence { n: u32, m: u32, k: u32 },
    /// `x ↦ x²` on the grid `i/2^k`, rounded down.
    IntervalSquare { k: u32 },
}

impl Builder {
    pub fn name(&self) -> &'static str {
        match self {
            Builder::Square { .. } => "square",
            Builder::CircleStack { .. } => "circle_stack",
            Builder::Torus { .. } => "torus",
            Builder::PeriodicCofinal { .. } => "periodic_cofinal",
            Builder::SquareSequence { .. } => "square_sequence",
            Builder::IntervalSquare { .. } => "interval_square",
        }
    }
}

/// A built system together with named landmark sets (`Q`, `Q_3`, `R_2`, ...).
#[derive(Clone, Debug)]
pub struct Built {
    pub system: FiniteSystem,
    pub landmarks: BTreeMap<String, PointSet>,
}

impl Built {
    pub fn landmark(&self, name: &str) -> &PointSet {
        self.landmarks
            .get(name)
            .unwrap_or_else(|| panic!("no landmark named {name}"))
    }
}

const MAX_LEVEL: u32 = 24;

pub fn build_system(builder: Builder) -> Result<Built> {
    match builder {
        Builder::Square { n } => {
            check_level("level", n, 2)?;
            Ok(square(n))
        }
        Builder::PeriodicCofinal { n } => {
            check_level("level", n, 2)?;
            Ok(periodic_cofinal(n))
        }
        Builder::SquareSequence { n, m, k } => {
            check_level("level", n, 2)?;
            check_level("depth", m, 1)?;
            check_level("rings", k, 1)?;
            Ok(square_sequence(n, m, k))
        }
        Builder::IntervalSquare { k } => {
            check_level("level", k, 1)?;
            Ok(interval_square(k))
        }
        Builder::CircleStack { n_max, q, p } => {
            check_level("ring count", n_max, 1)?;
            check_rotation(q, p)?;
            Ok(circle_stack(n_max, q, p))
        }
        Builder::Torus { q, p } => {
            check_rotation(q, p)?;
            if q > 200 {
                return Err(Error::Param(format!("torus grid q={q} exceeds 200")));
            }
            Ok(torus(q, p))
        }
    }
}

fn check_level(what: &str, v: u32, min: u32) -> Result<()> {
    if v < min || v > MAX_LEVEL {
        return Err(Error::Param(format!("{what} must lie in {min}..={MAX_LEVEL}, got {v}")));
    }
    Ok(())
}

fn check_rotation(q: u64, p: u64) -> Result<()> {
    if !(2..=100_000).contains(&q) {
        return Err(Error::Param(format!("grid q must lie in 2..=100000, got {q}")));
    }
    if q.gcd(&p) != 1 || p == 0 || p >= q {
        return Err(Error::Param(format!("rotation p={p} must satisfy 0 < p < q and gcd(p,q)=1")));
    }
    Ok(())
}

type Xy = (Dyadic, Dyadic);

/// Accumulates points (deduplicated by coordinates) and their images.
#[derive(Default)]
struct Table {
    coords: Vec<Xy>,
    index: HashMap<Xy, usize>,
    map: Vec<Option<usize>>,
    landmarks: BTreeMap<String, PointSet>,
}

impl Table {
    fn add(&mut self, p: Xy) -> usize {
        if let Some(&id) = self.index.get(&p) {
            return id;
        }
        let id = self.coords.len();
        self.coords.push(p);
        self.index.insert(p, id);
        self.map.push(None);
        id
    }

    fn id(&self, p: Xy) -> usize {
        *self
            .index
            .get(&p)
            .unwrap_or_else(|| panic!("builder references missing point ({}, {})", p.0, p.1))
    }

    fn set_map(&mut self, from: usize, to: usize) {
        debug_assert!(self.map[from].is_none(), "point {from} mapped twice");
        self.map[from] = Some(to);
    }

    fn landmark(&mut self, name: impl Into<String>, ids: &[usize]) {
        self.landmarks.insert(name.into(), PointSet::new(ids.to_vec()));
    }

    fn finish(self) -> Built {
        let coords = self
            .coords
            .iter()
            .map(|&(x, y)| vec![Exact::from(x), Exact::from(y)])
            .collect();
        let map = self
            .map
            .iter()
            .enumerate()
            .map(|(i, m)| m.unwrap_or_else(|| panic!("builder left point {i} unmapped")))
            .collect();
        let system = FiniteSystem::new(SpaceKind::Plane, coords, map)
            .expect("builder output passes validation");
        Built { system, landmarks: self.landmarks }
    }
}

fn s(n: u32) -> Dyadic {
    Dyadic::one_minus_pow2(n)
}

/// `{±s(m) : m ≤ depth}` ascending, each scaled by `scale`.
fn offsets(depth: u32, scale: Dyadic) -> Vec<Dyadic> {
    let mut out: Vec<Dyadic> = (1..=depth).rev().map(|m| -s(m)).collect();
    out.push(Dyadic::ZERO);
    out.extend((1..=depth).map(s));
    out.into_iter().map(|o| o.mul(scale)).collect()
}

/// The four vertices and the four sides of a square with half-width `v`,
/// each side listed in anticlockwise travel order.
struct Frame {
    ne: Xy,
    nw: Xy,
    sw: Xy,
    se: Xy,
    top: Vec<Xy>,
    left: Vec<Xy>,
    bottom: Vec<Xy>,
    right: Vec<Xy>,
}

impl Frame {
    fn new(v: Dyadic, offs: &[Dyadic]) -> Frame {
        Frame {
            ne: (v, v),
            nw: (-v, v),
            sw: (-v, -v),
            se: (v, -v),
            top: offs.iter().rev().map(|&o| (o, v)).collect(),
            left: offs.iter().rev().map(|&o| (-v, o)).collect(),
            bottom: offs.iter().map(|&o| (o, -v)).collect(),
            right: offs.iter().map(|&o| (v, o)).collect(),
        }
    }

    /// All points in anticlockwise order starting from the NE vertex.
    fn cycle(&self) -> Vec<Xy> {
        let mut out = vec![self.ne];
        out.extend(&self.top);
        out.push(self.nw);
        out.extend(&self.left);
        out.push(self.sw);
        out.extend(&self.bottom);
        out.push(self.se);
        out.extend(&self.right);
        out
    }

    fn sides(&self) -> [&Vec<Xy>; 4] {
        [&self.top, &self.left, &self.bottom, &self.right]
    }
}

/// Adds a Q-style boundary: fixed vertices, each side flowing towards the
/// next vertex and clamped at its last point.
fn add_boundary(t: &mut Table, frame: &Frame) -> Vec<usize> {
    let mut ids = Vec::new();
    for p in frame.cycle() {
        ids.push(t.add(p));
    }
    for v in [frame.ne, frame.nw, frame.sw, frame.se] {
        let id = t.id(v);
        t.set_map(id, id);
    }
    for side in frame.sides() {
        let side_ids: Vec<usize> = side.iter().map(|&p| t.id(p)).collect();
        for w in side_ids.windows(2) {
            t.set_map(w[0], w[1]);
        }
        let last = *side_ids.last().expect("sides are nonempty");
        t.set_map(last, last);
    }
    ids
}

/// Adds a ring as an anticlockwise cycle, except that points listed in
/// `exits` get the given images instead.
fn add_ring(t: &mut Table, frame: &Frame, exits: &[(Xy, Xy)]) -> Vec<usize> {
    let order = frame.cycle();
    let ids: Vec<usize> = order.iter().map(|&p| t.add(p)).collect();
    for (i, &p) in order.iter().enumerate() {
        if exits.iter().any(|(e, _)| *e == p) {
            continue;
        }
        t.set_map(ids[i], ids[(i + 1) % ids.len()]);
    }
    ids
}

fn q_frame(n: u32) -> Frame {
    Frame::new(Dyadic::ONE, &offsets(n, Dyadic::ONE))
}

/// Inner ring `Q_n`: half-width `s(n)`, side offsets `s(m)` for `m < n`.
fn inner_frame(n: u32) -> Frame {
    Frame::new(s(n), &offsets(n - 1, Dyadic::ONE))
}

/// Outer ring `R_n`: half-width `1 + 2^-n`, side offsets `s(m)` for `m ≤ n`.
fn outer_frame(n: u32) -> Frame {
    Frame::new(Dyadic::ONE + Dyadic::pow2_inv(n), &offsets(n, Dyadic::ONE))
}

fn outer_exit(n: u32) -> Xy {
    (-s(n - 1), Dyadic::ONE + Dyadic::pow2_inv(n))
}

fn upper_feeder(n: u32) -> Xy {
    (Dyadic::ZERO, Dyadic::new(3, 1) + s(n).half())
}

fn square(n_max: u32) -> Built {
    let mut t = Table::default();
    let origin = t.add((Dyadic::ZERO, Dyadic::ZERO));
    t.set_map(origin, origin);
    t.landmark("origin", &[origin]);

    let q = add_boundary(&mut t, &q_frame(n_max));
    t.landmark("Q", &q);

    // (0, 1/2^n) → (0, 1/2^(n-1)); (0, 1/2) sits on Q_1.
    let mut feeders = Vec::new();
    for n in 2..=n_max {
        feeders.push(t.add((Dyadic::ZERO, Dyadic::pow2_inv(n))));
    }

    for n in 1..=n_max {
        let frame = inner_frame(n);
        let ids = add_ring(&mut t, &frame, &[(frame.ne, frame.ne)]);
        t.landmark(format!("Q_{n}"), &ids);
    }
    for n in 1..=n_max {
        let ne = t.id(inner_frame(n).ne);
        if n < n_max {
            let next = t.id((s(n), s(n + 1)));
            t.set_map(ne, next);
        } else {
            t.set_map(ne, ne);
        }
    }
    for (i, n) in (2..=n_max).enumerate() {
        let target = t.id((Dyadic::ZERO, Dyadic::pow2_inv(n - 1)));
        t.set_map(feeders[i], target);
    }

    let uppers: Vec<usize> = (0..=n_max).map(|n| t.add(upper_feeder(n))).collect();
    let apex = t.add((Dyadic::ZERO, Dyadic::from_int(2)));
    t.set_map(apex, apex);
    t.landmark("apex", &[apex]);

    for n in 1..=n_max {
        let frame = outer_frame(n);
        let exit = outer_exit(n);
        let ids = add_ring(&mut t, &frame, &[(exit, exit)]);
        t.landmark(format!("R_{n}"), &ids);
    }
    // The R_1 exit is the first upper feeder point (0, 3/2).
    for n in 0..=n_max {
        let next = if n < n_max { uppers[n as usize + 1] } else { uppers[n as usize] };
        t.set_map(uppers[n as usize], next);
    }
    for n in 2..=n_max {
        let from = t.id(outer_exit(n));
        let to = t.id((-s(n - 1), Dyadic::ONE + Dyadic::pow2_inv(n - 1)));
        t.set_map(from, to);
    }
    t.finish()
}

fn periodic_cofinal(n_max: u32) -> Built {
    let mut t = Table::default();
    let q = add_boundary(&mut t, &q_frame(n_max));
    t.landmark("Q", &q);
    for n in 1..=n_max {
        let ids = add_ring(&mut t, &outer_frame(n), &[]);
        t.landmark(format!("R_{n}"), &ids);
    }
    t.finish()
}

/// Scales of the nested squares, ascending: 1, 1+2^-n, 2-2^-n, 2.
fn sequence_scales(n_max: u32) -> Vec<Dyadic> {
    let mut scales = vec![Dyadic::ONE, Dyadic::from_int(2)];
    for n in 1..=n_max {
        scales.push(Dyadic::from_int(2) - Dyadic::pow2_inv(n));
        scales.push(Dyadic::ONE + Dyadic::pow2_inv(n));
    }
    scales.sort();
    scales.dedup();
    scales
}

fn scale_name(sigma: Dyadic) -> String {
    format!("S[{sigma}]")
}

fn square_sequence(n_max: u32, depth: u32, rings: u32) -> Built {
    let mut t = Table::default();
    let scales = sequence_scales(n_max);
    for &sigma in &scales {
        let frame = Frame::new(sigma, &offsets(depth, sigma));
        let ids = add_boundary(&mut t, &frame);
        t.landmark(scale_name(sigma), &ids);
    }
    t.landmarks.insert("Q".into(), t.landmarks[&scale_name(Dyadic::ONE)].clone());
    t.landmarks.insert("2Q".into(), t.landmarks[&scale_name(Dyadic::from_int(2))].clone());

    // Connecting spirals run outward between consecutive scales, from
    // 1+2^-n_max up to 2-2^-n_max.
    let lo = Dyadic::ONE + Dyadic::pow2_inv(n_max);
    let hi = Dyadic::from_int(2) - Dyadic::pow2_inv(n_max);
    for w in scales.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a < lo || b > hi {
            continue;
        }
        let frames: Vec<Frame> = (1..=rings)
            .map(|j| {
                let sigma = a + (b - a).mul(s(j));
                Frame::new(sigma, &offsets(j.min(depth), sigma))
            })
            .collect();
        let mut all = Vec::new();
        for frame in &frames {
            all.extend(add_ring(&mut t, frame, &[(frame.ne, frame.ne)]));
        }
        for (j, frame) in frames.iter().enumerate() {
            let ne = t.id(frame.ne);
            let next = match frames.get(j + 1) {
                Some(f) => f.top[0],
                None => Frame::new(b, &offsets(depth, b)).top[0],
            };
            let next = t.id(next);
            t.set_map(ne, next);
        }
        t.landmark(format!("spiral[{a},{b}]"), &all);
    }
    t.finish()
}

fn interval_square(k: u32) -> Built {
    let size = 1i128 << k;
    let coords = (0..=size)
        .map(|i| vec![Exact::from(Dyadic::new(i, k)), Exact::zero()])
        .collect();
    // x = i/2^k, x² = i²/2^2k, rounded down to the grid: floor(i²/2^k).
    let map = (0..=size).map(|i| ((i * i) >> k) as usize).collect();
    let system = FiniteSystem::new(SpaceKind::Plane, coords, map).expect("valid grid");
    let mut landmarks = BTreeMap::new();
    landmarks.insert("zero".into(), PointSet::singleton(0));
    landmarks.insert("one".into(), PointSet::singleton(size as usize));
    Built { system, landmarks }
}

fn circle_stack(n_max: u32, q: u64, p: u64) -> Built {
    // Ascending heights: 0, 1/n_max, ..., 1/2, 1.
    let heights: Vec<Exact> = std::iter::once(Exact::zero())
        .chain((1..=n_max).rev().map(|n| Exact::new(1, n as i128)))
        .collect();
    let qi = q as usize;
    let mut coords = Vec::new();
    let mut map = Vec::new();
    let mut landmarks = BTreeMap::new();
    for (f, h) in heights.iter().enumerate() {
        for j in 0..qi {
            coords.push(vec![Exact::new(j as i128, q as i128), *h]);
            map.push(f * qi + (j + p as usize) % qi);
        }
        landmarks.insert(
            format!("fiber[{h}]"),
            PointSet::new((f * qi..(f + 1) * qi).collect()),
        );
    }
    let system = FiniteSystem::new(SpaceKind::Cylinder { q }, coords, map).expect("valid stack");
    Built { system, landmarks }
}

fn torus(q: u64, p: u64) -> Built {
    let qi = q as usize;
    let mut coords = Vec::with_capacity(qi * qi);
    let mut map = Vec::with_capacity(qi * qi);
    // id = j*q + i for the point (i/q, j/q); fibers are the rows j.
    for j in 0..qi {
        for i in 0..qi {
            coords.push(vec![Exact::new(i as i128, q as i128), Exact::new(j as i128, q as i128)]);
            map.push(j * qi + (i + p as usize) % qi);
        }
    }
    let mut landmarks = BTreeMap::new();
    for j in 0..qi {
        landmarks.insert(
            format!("fiber[{}]", Exact::new(j as i128, q as i128)),
            PointSet::new((j * qi..(j + 1) * qi).collect()),
        );
    }
    landmarks.insert("all".into(), PointSet::new((0..qi * qi).collect()));
    let system = FiniteSystem::new(SpaceKind::Torus { q }, coords, map).expect("valid torus");
    Built { system, landmarks }
}
