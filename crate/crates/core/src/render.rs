//! DOT and SVG pictures of a system and, optionally, its δ-chain graph.

use std::fmt::Write as _;

use crate::chain_graph::ChainGraph;
use crate::dyadic::Exact;
use crate::error::{Error, Result};
use crate::metric::SpaceKind;
use crate::systems::FiniteSystem;

/// Pixels per coordinate unit.
const SCALE: i128 = 400;
const MARGIN: i128 = 20;

pub fn render_dot(sys: &FiniteSystem, chain: Option<&ChainGraph<'_>>) -> String {
    let mut out = String::from("digraph system {\n");
    for p in sys.points() {
        writeln!(out, "  {} [label=\"{} {}\"];", p.id, p.id, p.label()).unwrap();
    }
    for (x, &fx) in sys.map().iter().enumerate() {
        writeln!(out, "  {x} -> {fx};").unwrap();
    }
    if let Some(g) = chain {
        for x in 0..sys.len() {
            for &y in g.successors(x) {
                if y != sys.map()[x] {
                    writeln!(out, "  {x} -> {y} [style=dotted];").unwrap();
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

fn px(value: Exact, origin: Exact) -> String {
    ((value - origin).mul_int(SCALE) + Exact::from_int(MARGIN)).to_decimal(3)
}

/// Points at their exact coordinates; solid arrows for the map, dotted
/// arrows for chain edges that are not map edges.
pub fn render_svg(sys: &FiniteSystem, chain: Option<&ChainGraph<'_>>) -> Result<String> {
    if matches!(sys.space(), SpaceKind::Circle { .. }) {
        return Err(Error::Unsupported(format!(
            "svg needs a two-dimensional space, not {}; use --format dot",
            sys.space()
        )));
    }
    let xs: Vec<Exact> = sys.points().iter().map(|p| p.coords[0]).collect();
    let ys: Vec<Exact> = sys.points().iter().map(|p| p.coords[1]).collect();
    let min_x = xs.iter().copied().fold(xs[0], Exact::min);
    let max_x = xs.iter().copied().fold(xs[0], Exact::max);
    let min_y = ys.iter().copied().fold(ys[0], Exact::min);
    let max_y = ys.iter().copied().fold(ys[0], Exact::max);
    // SVG y grows downwards.
    let x_of = |id: usize| px(xs[id], min_x);
    let y_of = |id: usize| px(max_y - ys[id], Exact::zero());
    let extent = |span: Exact| (span.mul_int(SCALE) + Exact::from_int(2 * MARGIN)).to_decimal(3);
    let (width, height) = (extent(max_x - min_x), extent(max_y - min_y));

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    )
    .unwrap();
    out.push_str(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 6 6\" refX=\"6\" refY=\"3\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\"/></marker></defs>\n",
    );
    let edge = |out: &mut String, class: &str, dash: &str, x: usize, y: usize| {
        if x == y {
            writeln!(
                out,
                "<path class=\"{class}\" d=\"M{x0},{y0} c6,-12 12,-6 0,0\" fill=\"none\" stroke=\"black\"{dash} marker-end=\"url(#arrow)\"/>",
                x0 = x_of(x),
                y0 = y_of(x),
            )
            .unwrap();
        } else {
            writeln!(
                out,
                "<path class=\"{class}\" d=\"M{},{} L{},{}\" fill=\"none\" stroke=\"black\"{dash} marker-end=\"url(#arrow)\"/>",
                x_of(x),
                y_of(x),
                x_of(y),
                y_of(y),
            )
            .unwrap();
        }
    };
    for (x, &fx) in sys.map().iter().enumerate() {
        edge(&mut out, "map", "", x, fx);
    }
    if let Some(g) = chain {
        for x in 0..sys.len() {
            for &y in g.successors(x) {
                if y != sys.map()[x] {
                    edge(&mut out, "chain", " stroke-dasharray=\"2,2\"", x, y);
                }
            }
        }
    }
    for p in sys.points() {
        writeln!(
            out,
            "<circle class=\"point\" cx=\"{}\" cy=\"{}\" r=\"2\"><title>{} {}</title></circle>",
            x_of(p.id),
            y_of(p.id),
            p.id,
            p.label()
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain_graph::build_chain_graph;
    use crate::systems::{build_system, Builder};

    #[test]
    fn square_svg_counts() {
        let sys = build_system(Builder::Square { n: 2 }).unwrap().system;
        let svg = render_svg(&sys, None).unwrap();
        assert_eq!(svg.matches("class=\"point\"").count(), 93);
        assert_eq!(svg.matches("class=\"map\"").count(), 93);
        assert_eq!(svg.matches("class=\"chain\"").count(), 0);
        // The apex (0, 2) is the top edge, the origin sits 2 units lower.
        assert!(svg.contains("width=\"1240\" height=\"1440\""));
        assert!(svg.contains("cx=\"620\" cy=\"20\""), "{svg}");
        assert!(svg.contains("cx=\"620\" cy=\"820\""));
    }

    #[test]
    fn chain_edges_are_dotted() {
        let sys = build_system(Builder::Torus { q: 5, p: 2 }).unwrap().system;
        let g = build_chain_graph(&sys, "1/2^2".parse().unwrap()).unwrap();
        let svg = render_svg(&sys, Some(&g)).unwrap();
        let chain_only = g.edge_count() - sys.len();
        assert_eq!(svg.matches("class=\"chain\"").count(), chain_only);
        assert_eq!(svg.matches("stroke-dasharray").count(), chain_only);
    }

    #[test]
    fn dot_counts() {
        let sys = build_system(Builder::Torus { q: 5, p: 2 }).unwrap().system;
        let dot = render_dot(&sys, None);
        assert_eq!(dot.matches("->").count(), 25);
        assert_eq!(dot.matches("[label=").count(), 25);

        let fixed = FiniteSystem::new(
            SpaceKind::Circle { q: 4 },
            vec![vec![Exact::zero()], vec![Exact::new(1, 2)]],
            vec![0, 1],
        )
        .unwrap();
        let dot = render_dot(&fixed, None);
        assert!(dot.contains("0 -> 0;") && dot.contains("1 -> 1;"));
        assert!(matches!(render_svg(&fixed, None), Err(Error::Unsupported(_))));
    }
}
