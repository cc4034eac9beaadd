//! Spaces, points, point sets and the Hausdorff comparisons between them.

use std::fmt;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::dyadic::Exact;
use crate::error::{Error, Result};

/// Ambient space of a finite system.
///
/// The plane carries the L∞ metric. Circle coordinates are residues `j/q` in
/// `[0, 1)` with the wraparound metric; `Torus` is the product of two such
/// circles and `Cylinder` a circle times a line (used by the stacked-circle
/// builder, whose fiber heights `1/n` are not residues). Products use the max
/// of the component metrics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    Plane,
    Circle { q: u64 },
    Torus { q: u64 },
    Cylinder { q: u64 },
}

impl SpaceKind {
    pub fn dim(&self) -> usize {
        match self {
            SpaceKind::Circle { .. } => 1,
            _ => 2,
        }
    }

    /// Whether coordinate `axis` wraps around at 1.
    pub fn is_circular(&self, axis: usize) -> bool {
        match self {
            SpaceKind::Plane => false,
            SpaceKind::Circle { .. } | SpaceKind::Torus { .. } => true,
            SpaceKind::Cylinder { .. } => axis == 0,
        }
    }

    pub fn grid(&self) -> Option<u64> {
        match *self {
            SpaceKind::Plane => None,
            SpaceKind::Circle { q } | SpaceKind::Torus { q } | SpaceKind::Cylinder { q } => Some(q),
        }
    }

    /// The header line of the system text format.
    pub fn header(&self) -> String {
        match self {
            SpaceKind::Plane => "space plane".to_string(),
            SpaceKind::Circle { q } => format!("space circle q={q}"),
            SpaceKind::Torus { q } => format!("space torus q={q}"),
            SpaceKind::Cylinder { q } => format!("space cylinder q={q}"),
        }
    }

    /// Checks arity and that circular coordinates are grid residues in [0,1).
    pub fn validate_coords(&self, coords: &[Exact]) -> Result<()> {
        if coords.len() != self.dim() {
            return Err(Error::InvalidSystem(format!(
                "expected {} coordinate(s), got {}",
                self.dim(),
                coords.len()
            )));
        }
        let q = self.grid().map(|q| q as i128);
        for (axis, c) in coords.iter().enumerate() {
            if !self.is_circular(axis) {
                continue;
            }
            if c.is_negative() || *c >= Exact::from_int(1) {
                return Err(Error::InvalidSystem(format!(
                    "circle coordinate {c} outside [0,1)"
                )));
            }
            if let Some(q) = q {
                if c.in_units(q).is_none() {
                    return Err(Error::InvalidSystem(format!(
                        "circle coordinate {c} is not a multiple of 1/{q}"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.header().trim_start_matches("space "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub id: usize,
    pub coords: Vec<Exact>,
    pub space: SpaceKind,
}

impl Point {
    pub fn new(id: usize, coords: Vec<Exact>, space: SpaceKind) -> Point {
        Point { id, coords, space }
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        format!("({})", parts.join(", "))
    }
}

fn axis_distance(a: Exact, b: Exact, circular: bool) -> Exact {
    let d = (a - b).abs();
    if circular {
        d.min(Exact::from_int(1) - d)
    } else {
        d
    }
}

/// Exact distance between two points of the same space.
pub fn distance(p: &Point, q: &Point) -> Result<Exact> {
    if p.space != q.space {
        return Err(Error::Incompatible(format!(
            "points {} and {} live in different spaces ({} vs {})",
            p.id, q.id, p.space, q.space
        )));
    }
    if p.coords.len() != q.coords.len() {
        return Err(Error::Incompatible("coordinate arity differs".into()));
    }
    Ok(p.coords
        .iter()
        .zip(&q.coords)
        .enumerate()
        .map(|(axis, (&a, &b))| axis_distance(a, b, p.space.is_circular(axis)))
        .fold(Exact::zero(), Exact::max))
}

/// Integer embedding of a point list: every coordinate times a common unit.
///
/// Distances computed here are exact multiples of `1/unit`; the chain-graph
/// and Hausdorff hot paths work in these units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub unit: i128,
    coords: Vec<[i128; 2]>,
    circular: [bool; 2],
}

impl Embedding {
    pub fn new(space: SpaceKind, points: &[Point]) -> Embedding {
        let mut unit: i128 = space.grid().map(|q| q as i128).unwrap_or(1);
        for p in points {
            for c in &p.coords {
                unit = unit.lcm(&c.denom());
            }
        }
        let coords = points
            .iter()
            .map(|p| {
                let mut out = [0i128; 2];
                for (axis, c) in p.coords.iter().enumerate() {
                    out[axis] = c.in_units(unit).expect("unit is a common denominator");
                }
                out
            })
            .collect();
        let circular = [space.is_circular(0), space.dim() > 1 && space.is_circular(1)];
        Embedding { unit, coords, circular }
    }

    #[inline]
    pub fn dist_units(&self, a: usize, b: usize) -> i128 {
        let (pa, pb) = (&self.coords[a], &self.coords[b]);
        let mut best = 0;
        for axis in 0..2 {
            let mut d = (pa[axis] - pb[axis]).abs();
            if self.circular[axis] {
                d = d.min(self.unit - d);
            }
            best = best.max(d);
        }
        best
    }

    pub fn to_exact(&self, units: i128) -> Exact {
        Exact::new(units, self.unit)
    }

    /// Exclusive bound in units: `d < delta` iff `dist_units < strict_bound(delta)`.
    pub fn strict_bound(&self, delta: Exact) -> i128 {
        delta.ceil_units(self.unit)
    }

    /// Inclusive bound in units: `d <= tau` iff `dist_units <= inclusive_bound(tau)`.
    pub fn inclusive_bound(&self, tau: Exact) -> i128 {
        tau.floor_units(self.unit)
    }

    pub fn coords(&self, id: usize) -> [i128; 2] {
        self.coords[id]
    }
}

/// Sorted, duplicate-free list of point ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(Vec<usize>);

impl PointSet {
    pub fn new(mut ids: Vec<usize>) -> PointSet {
        ids.sort_unstable();
        ids.dedup();
        PointSet(ids)
    }

    pub fn singleton(id: usize) -> PointSet {
        PointSet(vec![id])
    }

    pub fn ids(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        PointSet(self.0.iter().copied().filter(|&x| other.contains(x)).collect())
    }

    pub fn min_id(&self) -> Option<usize> {
        self.0.first().copied()
    }
}

impl From<Vec<usize>> for PointSet {
    fn from(ids: Vec<usize>) -> Self {
        PointSet::new(ids)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, id) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{id}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Canonically ordered family of point sets (lexicographic on sorted ids).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SetFamily(Vec<PointSet>);

impl SetFamily {
    pub fn new(mut sets: Vec<PointSet>) -> SetFamily {
        sets.sort();
        sets.dedup();
        SetFamily(sets)
    }

    pub fn sets(&self) -> &[PointSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, set: &PointSet) -> bool {
        self.0.binary_search(set).is_ok()
    }

    pub fn union(&self, other: &SetFamily) -> SetFamily {
        SetFamily::new(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PointSet> {
        self.0.iter()
    }
}

impl FromIterator<PointSet> for SetFamily {
    fn from_iter<I: IntoIterator<Item = PointSet>>(iter: I) -> Self {
        SetFamily::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a SetFamily {
    type Item = &'a PointSet;
    type IntoIter = std::slice::Iter<'a, PointSet>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl Serialize for SetFamily {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Directed half of the Hausdorff distance: `max_{a in A} min_{b in B} d(a,b)`.
pub fn directed_gap<T, F>(a: &[usize], b: &[usize], mut d: F) -> T
where
    T: Ord + Copy + Default,
    F: FnMut(usize, usize) -> T,
{
    let mut worst = T::default();
    for &x in a {
        let mut best: Option<T> = None;
        for &y in b {
            let v = d(x, y);
            if best.is_none_or(|bv| v < bv) {
                best = Some(v);
                if v == T::default() {
                    break;
                }
            }
        }
        if let Some(bv) = best {
            if bv > worst {
                worst = bv;
            }
        }
    }
    worst
}

/// Hausdorff distance between two nonempty id sets under the metric `d`.
pub fn hausdorff_by<T, F>(a: &[usize], b: &[usize], mut d: F) -> Result<T>
where
    T: Ord + Copy + Default,
    F: FnMut(usize, usize) -> T,
{
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("Hausdorff distance needs nonempty sets".into()));
    }
    let ab = directed_gap(a, b, &mut d);
    let ba = directed_gap(b, a, |x, y| d(y, x));
    Ok(ab.max(ba))
}

/// Hausdorff distance between two nonempty lists of points.
pub fn hausdorff(a: &[Point], b: &[Point]) -> Result<Exact> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("Hausdorff distance needs nonempty sets".into()));
    }
    let mut worst = Exact::zero();
    for (xs, ys) in [(a, b), (b, a)] {
        for x in xs {
            let mut best: Option<Exact> = None;
            for y in ys {
                let v = distance(x, y)?;
                if best.is_none_or(|bv| v < bv) {
                    best = Some(v);
                }
            }
            worst = worst.max(best.expect("nonempty"));
        }
    }
    Ok(worst)
}

/// One-sided family gap `max_{A in F} min_{B in G} h(A,B)`.
pub fn family_gap_by<T, H>(f: &SetFamily, g: &SetFamily, mut h: H) -> Result<T>
where
    T: Ord + Copy + Default,
    H: FnMut(&PointSet, &PointSet) -> Result<T>,
{
    if f.is_empty() || g.is_empty() {
        return Err(Error::Empty("family gap needs nonempty families".into()));
    }
    let mut worst = T::default();
    for a in f {
        let mut best: Option<T> = None;
        for b in g {
            let v = h(a, b)?;
            if best.is_none_or(|bv| v < bv) {
                best = Some(v);
            }
        }
        worst = worst.max(best.expect("nonempty"));
    }
    Ok(worst)
}
