//! Finite systems: a point set with exact coordinates and a total self-map.

mod builders;
mod format;

pub use builders::{build_system, Builder, Built};
pub use format::{load_system, parse_sets_file, save_system, write_sets_file};

use crate::dyadic::Exact;
use crate::error::{Error, Result};
use crate::metric::{family_gap_by, hausdorff_by, Embedding, Point, PointSet, SetFamily, SpaceKind};

#[derive(Clone, Debug)]
pub struct FiniteSystem {
    space: SpaceKind,
    points: Vec<Point>,
    map: Vec<usize>,
    preimages: Vec<Vec<usize>>,
    embedding: Embedding,
    bijective: bool,
    min_gap: Option<Exact>,
}

impl PartialEq for FiniteSystem {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.points == other.points && self.map == other.map
    }
}

impl Eq for FiniteSystem {}

impl FiniteSystem {
    /// Validates and freezes a system. Point ids are the indices of `coords`.
    pub fn new(space: SpaceKind, coords: Vec<Vec<Exact>>, map: Vec<usize>) -> Result<FiniteSystem> {
        if coords.is_empty() {
            return Err(Error::InvalidSystem("no points".into()));
        }
        if map.len() != coords.len() {
            return Err(Error::InvalidSystem(format!(
                "map has {} entries for {} points",
                map.len(),
                coords.len()
            )));
        }
        let n = coords.len();
        if let Some((src, &dst)) = map.iter().enumerate().find(|(_, &d)| d >= n) {
            return Err(Error::InvalidSystem(format!("point {src} maps to unknown id {dst}")));
        }
        let mut points = Vec::with_capacity(n);
        for (id, c) in coords.into_iter().enumerate() {
            space.validate_coords(&c)?;
            points.push(Point::new(id, c, space));
        }
        let embedding = Embedding::new(space, &points);
        let mut min_units: Option<i128> = None;
        for a in 0..n {
            for b in a + 1..n {
                let d = embedding.dist_units(a, b);
                if d == 0 {
                    return Err(Error::InvalidSystem(format!(
                        "points {a} and {b} coincide at {}",
                        points[a].label()
                    )));
                }
                if min_units.is_none_or(|m| d < m) {
                    min_units = Some(d);
                }
            }
        }
        let mut preimages = vec![Vec::new(); n];
        for (src, &dst) in map.iter().enumerate() {
            preimages[dst].push(src);
        }
        let bijective = preimages.iter().all(|p| p.len() == 1);
        Ok(FiniteSystem {
            space,
            points,
            map,
            preimages,
            min_gap: min_units.map(|u| embedding.to_exact(u)),
            embedding,
            bijective,
        })
    }

    pub fn space(&self) -> SpaceKind {
        self.space
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, id: usize) -> Result<&Point> {
        self.points.get(id).ok_or(Error::UnknownId(id))
    }

    /// The map as an id table.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, id: usize) -> Result<usize> {
        self.map.get(id).copied().ok_or(Error::UnknownId(id))
    }

    pub fn preimages(&self, id: usize) -> Result<PointSet> {
        self.preimages
            .get(id)
            .map(|p| PointSet::new(p.clone()))
            .ok_or(Error::UnknownId(id))
    }

    pub(crate) fn preimage_ids(&self, id: usize) -> &[usize] {
        &self.preimages[id]
    }

    pub fn is_bijective(&self) -> bool {
        self.bijective
    }

    /// Minimum pairwise distance; `None` for a one-point system.
    pub fn min_gap(&self) -> Option<Exact> {
        self.min_gap
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    #[inline]
    pub fn dist_units(&self, a: usize, b: usize) -> i128 {
        self.embedding.dist_units(a, b)
    }

    pub fn distance(&self, a: usize, b: usize) -> Result<Exact> {
        self.check_id(a)?;
        self.check_id(b)?;
        Ok(self.embedding.to_exact(self.dist_units(a, b)))
    }

    /// Looks up a point by its exact coordinates.
    pub fn find(&self, coords: &[Exact]) -> Option<usize> {
        self.points.iter().position(|p| p.coords == coords)
    }

    pub fn check_id(&self, id: usize) -> Result<()> {
        if id < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownId(id))
        }
    }

    /// Validates a nonempty set of known ids.
    pub fn check_set(&self, set: &PointSet) -> Result<()> {
        if set.is_empty() {
            return Err(Error::Empty("point set is empty".into()));
        }
        for &id in set.ids() {
            self.check_id(id)?;
        }
        Ok(())
    }

    pub fn hausdorff_units(&self, a: &PointSet, b: &PointSet) -> Result<i128> {
        self.check_set(a)?;
        self.check_set(b)?;
        hausdorff_by(a.ids(), b.ids(), |x, y| self.dist_units(x, y))
    }

    pub fn hausdorff(&self, a: &PointSet, b: &PointSet) -> Result<Exact> {
        self.hausdorff_units(a, b).map(|u| self.embedding.to_exact(u))
    }

    /// `max_{A in F} min_{B in G} d_H(A, B)`.
    pub fn family_gap(&self, f: &SetFamily, g: &SetFamily) -> Result<Exact> {
        family_gap_by(f, g, |a, b| self.hausdorff_units(a, b)).map(|u| self.embedding.to_exact(u))
    }

    /// Every point id.
    pub fn all(&self) -> PointSet {
        PointSet::new((0..self.len()).collect())
    }
}
