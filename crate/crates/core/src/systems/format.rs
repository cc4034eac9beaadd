//! Line-based text formats for systems and named point sets.
//!
//! ```text
//! space plane | space circle q=<int> | space torus q=<int> | space cylinder q=<int>
//! point <id> <coord> [<coord>]
//! map <src-id> <dst-id>
//! ```
//!
//! Coordinates are canonical `n/2^k` dyadics, or reduced `p/q` where the
//! denominator is not a power of two. `#` starts a comment line.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::FiniteSystem;
use crate::dyadic::Exact;
use crate::error::{Error, Result};
use crate::metric::{PointSet, SpaceKind};

pub fn save_system(sys: &FiniteSystem) -> String {
    let mut out = String::new();
    out.push_str(&sys.space().header());
    out.push('\n');
    for p in sys.points() {
        write!(out, "point {}", p.id).unwrap();
        for c in &p.coords {
            write!(out, " {c}").unwrap();
        }
        out.push('\n');
    }
    for (src, dst) in sys.map().iter().enumerate() {
        writeln!(out, "map {src} {dst}").unwrap();
    }
    out
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse { line, reason: reason.into() }
}

fn parse_id(tok: &str, line: usize) -> Result<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) || (tok.len() > 1 && tok.starts_with('0')) {
        return Err(parse_err(line, format!("invalid id {tok:?}")));
    }
    tok.parse().map_err(|_| parse_err(line, format!("id {tok:?} out of range")))
}

fn parse_space(line_no: usize, toks: &[&str]) -> Result<SpaceKind> {
    let grid = |tok: Option<&&str>| -> Result<u64> {
        let tok = tok.ok_or_else(|| parse_err(line_no, "missing q=<int>"))?;
        let v = tok
            .strip_prefix("q=")
            .ok_or_else(|| parse_err(line_no, format!("expected q=<int>, got {tok:?}")))?;
        let q = parse_id(v, line_no)?;
        if !(2..=1_000_000).contains(&q) {
            return Err(parse_err(line_no, format!("grid q={q} out of range")));
        }
        Ok(q as u64)
    };
    let (kind, arity) = match toks.get(1).copied() {
        Some("plane") => (SpaceKind::Plane, 2),
        Some("circle") => (SpaceKind::Circle { q: grid(toks.get(2))? }, 3),
        Some("torus") => (SpaceKind::Torus { q: grid(toks.get(2))? }, 3),
        Some("cylinder") => (SpaceKind::Cylinder { q: grid(toks.get(2))? }, 3),
        other => return Err(parse_err(line_no, format!("unknown space {other:?}"))),
    };
    if toks.len() != arity {
        return Err(parse_err(line_no, "trailing tokens after space declaration"));
    }
    Ok(kind)
}

pub fn load_system(text: &str) -> Result<FiniteSystem> {
    let mut space: Option<SpaceKind> = None;
    let mut coords: Vec<Vec<Exact>> = Vec::new();
    let mut point_lines: Vec<usize> = Vec::new();
    let mut maps: Vec<(usize, usize, usize)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match (toks[0], space) {
            ("space", None) => space = Some(parse_space(line_no, &toks)?),
            ("space", Some(_)) => return Err(parse_err(line_no, "duplicate space declaration")),
            (_, None) => return Err(parse_err(line_no, "the first line must declare the space")),
            ("point", Some(kind)) => {
                let id = parse_id(toks.get(1).copied().unwrap_or(""), line_no)?;
                if id != coords.len() {
                    return Err(parse_err(
                        line_no,
                        if id < coords.len() {
                            format!("duplicate point id {id}")
                        } else {
                            format!("point id {id} out of sequence, expected {}", coords.len())
                        },
                    ));
                }
                let values = toks[2..]
                    .iter()
                    .map(|t| t.parse::<Exact>())
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| parse_err(line_no, e.to_string()))?;
                kind.validate_coords(&values).map_err(|e| parse_err(line_no, e.to_string()))?;
                coords.push(values);
                point_lines.push(line_no);
            }
            ("map", Some(_)) => {
                if toks.len() != 3 {
                    return Err(parse_err(line_no, "expected map <src-id> <dst-id>"));
                }
                let src = parse_id(toks[1], line_no)?;
                let dst = parse_id(toks[2], line_no)?;
                maps.push((line_no, src, dst));
            }
            (other, Some(_)) => return Err(parse_err(line_no, format!("unknown directive {other:?}"))),
        }
    }
    let space = space.ok_or_else(|| parse_err(1, "missing space declaration"))?;
    let n = coords.len();
    let mut map: Vec<Option<usize>> = vec![None; n];
    for &(line_no, src, dst) in &maps {
        if src >= n {
            return Err(parse_err(line_no, format!("map source {src} is not a declared point")));
        }
        if dst >= n {
            return Err(parse_err(line_no, format!("map target {dst} is not a declared point")));
        }
        if map[src].replace(dst).is_some() {
            return Err(parse_err(line_no, format!("duplicate map for point {src}")));
        }
    }
    let map = map
        .iter()
        .enumerate()
        .map(|(id, m)| m.ok_or_else(|| parse_err(point_lines[id], format!("point {id} has no map line"))))
        .collect::<Result<Vec<_>>>()?;
    FiniteSystem::new(space, coords, map)
}

/// `set <name> <id> ...` per line.
pub fn write_sets_file(sets: &BTreeMap<String, PointSet>) -> String {
    let mut out = String::new();
    for (name, set) in sets {
        out.push_str("set ");
        out.push_str(name);
        for id in set.ids() {
            write!(out, " {id}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_sets_file(text: &str) -> Result<BTreeMap<String, PointSet>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] != "set" || toks.len() < 3 {
            return Err(parse_err(line_no, "expected set <name> <id> ..."));
        }
        let ids = toks[2..]
            .iter()
            .map(|t| parse_id(t, line_no))
            .collect::<Result<Vec<_>>>()?;
        if out.insert(toks[1].to_string(), PointSet::new(ids)).is_some() {
            return Err(parse_err(line_no, format!("duplicate set name {}", toks[1])));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{build_system, Builder};

    #[test]
    fn round_trip_square() {
        let sys = build_system(Builder::Square { n: 4 }).unwrap().system;
        let text = save_system(&sys);
        let back = load_system(&text).unwrap();
        assert_eq!(back, sys);
        assert_eq!(save_system(&back), text);
    }

    #[test]
    fn round_trip_cylinder() {
        let sys = build_system(Builder::CircleStack { n_max: 3, q: 5, p: 2 }).unwrap().system;
        let text = save_system(&sys);
        assert!(text.contains("point 6 1/5 1/3"), "{text}");
        assert_eq!(load_system(&text).unwrap(), sys);
    }

    #[test]
    fn dangling_target() {
        let text = "space plane\npoint 0 0/2^0 0/2^0\nmap 0 1\n";
        assert_eq!(
            load_system(text),
            Err(Error::Parse { line: 3, reason: "map target 1 is not a declared point".into() })
        );
    }

    #[test]
    fn non_canonical_dyadic() {
        let text = "space plane\npoint 0 2/2^1 0/2^0\nmap 0 0\n";
        let err = load_system(text).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(err.to_string().contains("\"1/2^0\""), "{err}");
    }

    #[test]
    fn structural_errors() {
        let dup = "space plane\npoint 0 0/2^0 0/2^0\npoint 0 1/2^0 0/2^0\nmap 0 0\n";
        assert!(matches!(load_system(dup), Err(Error::Parse { line: 3, .. })));
        let missing = "space plane\npoint 0 0/2^0 0/2^0\npoint 1 1/2^0 0/2^0\nmap 0 0\n";
        assert!(matches!(load_system(missing), Err(Error::Parse { line: 3, .. })));
        let twice = "space plane\npoint 0 0/2^0 0/2^0\nmap 0 0\nmap 0 0\n";
        assert!(matches!(load_system(twice), Err(Error::Parse { line: 4, .. })));
        let no_space = "point 0 0/2^0 0/2^0\n";
        assert!(matches!(load_system(no_space), Err(Error::Parse { line: 1, .. })));
        let off_grid = "space circle q=4\npoint 0 1/3\nmap 0 0\n";
        assert!(matches!(load_system(off_grid), Err(Error::Parse { line: 2, .. })));
        let comments = "# hi\n\nspace circle q=4\npoint 0 1/2^2\n# x\nmap 0 0\n";
        assert_eq!(load_system(comments).unwrap().len(), 1);
    }

    #[test]
    fn sets_file() {
        let text = "# landmarks\nset Q 3 1 2\nset origin 0\n";
        let sets = parse_sets_file(text).unwrap();
        assert_eq!(sets["Q"], PointSet::new(vec![1, 2, 3]));
        assert_eq!(parse_sets_file(&write_sets_file(&sets)).unwrap(), sets);
        assert!(parse_sets_file("set a\n").is_err());
        assert!(parse_sets_file("set a 1\nset a 2\n").is_err());
    }
}
