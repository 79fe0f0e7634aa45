//! Plain-text graph and cover files.
//!
//! Graphs use a DIMACS-like layout with 1-indexed vertices:
//!
//! ```text
//! c optional comment
//! p 3 2
//! e 1 2
//! e 2 3
//! ```
//!
//! Covers list one point per line, `v u` for a vertex and `i u v a/b` for the
//! point on edge `{u, v}` at distance `a/b` from `u`, after an optional
//! `p cover N` header. The writer emits the header and the points in
//! canonical order, so equal covers give identical files.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{CoverError, Result};
use crate::graph::Graph;
use crate::point::{Cover, Point};
use crate::rational::Rational;

fn parse_err(line: usize, message: impl Into<String>) -> CoverError {
    CoverError::Parse { line, message: message.into() }
}

fn significant_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first() {
            None | Some(&"c") => None,
            Some(_) => Some((i + 1, fields)),
        }
    })
}

fn parse_index(line: usize, field: &str) -> Result<usize> {
    field
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("expected a vertex number, found `{field}`")))
}

fn parse_vertex(line: usize, field: &str, n: usize) -> Result<usize> {
    match parse_index(line, field)? {
        v if v >= 1 && v <= n => Ok(v - 1),
        v => Err(parse_err(line, format!("vertex {v} outside 1..={n}"))),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (line, fields) in significant_lines(text) {
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(parse_err(line, "second `p` line"));
                }
                // both `p n m` and DIMACS `p edge n m`
                let nums = match fields.len() {
                    3 => &fields[1..],
                    4 => &fields[2..],
                    _ => return Err(parse_err(line, "expected `p <vertices> <edges>`")),
                };
                header = Some((parse_index(line, nums[0])?, parse_index(line, nums[1])?));
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| parse_err(line, "edge before the `p` line"))?;
                if fields.len() != 3 {
                    return Err(parse_err(line, "expected `e <u> <v>`"));
                }
                let u = parse_vertex(line, fields[1], n)?;
                let v = parse_vertex(line, fields[2], n)?;
                if u == v {
                    return Err(parse_err(line, format!("self-loop at vertex {}", u + 1)));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(parse_err(line, format!("duplicate edge {} {}", u + 1, v + 1)));
                }
                edges.push((u, v));
            }
            other => return Err(parse_err(line, format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing `p` line"))?;
    if edges.len() != m {
        return Err(parse_err(0, format!("header announces {m} edges, found {}", edges.len())));
    }
    Graph::new(n, &edges)
}

pub fn parse_graph_file(path: impl AsRef<Path>) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

pub fn write_graph(path: impl AsRef<Path>, g: &Graph) -> Result<()> {
    Ok(fs::write(path, format_graph(g))?)
}

/// Reads a cover of `g`; every point must lie on `g`.
pub fn parse_cover(text: &str, g: &Graph) -> Result<Cover> {
    let n = g.vertex_count();
    let mut announced = None;
    let mut cover = Cover::new();
    for (line, fields) in significant_lines(text) {
        let point = match (fields[0], fields.len()) {
            ("p", 3) if fields[1] == "cover" => {
                announced = Some(parse_index(line, fields[2])?);
                continue;
            }
            ("v", 2) => Point::Vertex(parse_vertex(line, fields[1], n)?),
            ("i", 4) => {
                let u = parse_vertex(line, fields[1], n)?;
                let v = parse_vertex(line, fields[2], n)?;
                if !g.has_edge(u, v) {
                    return Err(parse_err(line, format!("no edge {} {}", u + 1, v + 1)));
                }
                let lambda: Rational = fields[3]
                    .parse()
                    .map_err(|_| parse_err(line, format!("invalid position `{}`", fields[3])))?;
                if lambda.is_negative() || lambda > Rational::one() {
                    return Err(parse_err(line, format!("position {lambda} outside [0,1]")));
                }
                Point::on_edge(u, v, lambda)
            }
            _ => return Err(parse_err(line, format!("malformed cover line `{}`", fields.join(" ")))),
        };
        cover.insert(point);
    }
    if let Some(count) = announced {
        if count != cover.len() {
            return Err(parse_err(0, format!("header announces {count} points, found {}", cover.len())));
        }
    }
    Ok(cover)
}

pub fn read_cover(path: impl AsRef<Path>, g: &Graph) -> Result<Cover> {
    parse_cover(&fs::read_to_string(path)?, g)
}

pub fn format_cover(s: &Cover) -> String {
    let mut out = format!("p cover {}\n", s.len());
    for p in s.iter() {
        let _ = match p {
            Point::Vertex(w) => writeln!(out, "v {}", w + 1),
            Point::Interior { u, v, lambda } => writeln!(out, "i {} {} {lambda}", u + 1, v + 1),
        };
    }
    out
}

pub fn write_cover(path: impl AsRef<Path>, s: &Cover) -> Result<()> {
    Ok(fs::write(path, format_cover(s))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn k2_from_text() {
        let g = parse_graph("p 2 1\ne 1 2\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
        let g = parse_graph("c dimacs style\np edge 2 1\ne 2 1\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn interior_point_line() {
        let g = path(1);
        let s = parse_cover("i 1 2 1/2\n", &g).unwrap();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![&Point::on_edge(0, 1, Rational::new(1, 2))]);
        // measured from the first listed vertex
        let s = parse_cover("i 2 1 1/3\n", &g).unwrap();
        assert!(s.contains(&Point::on_edge(0, 1, Rational::new(2, 3))));
    }

    #[test]
    fn c4_cover_round_trip() {
        let g = cycle(4);
        let s: Cover = [
            Point::on_edge(0, 1, Rational::new(1, 3)),
            Point::on_edge(1, 2, Rational::new(2, 3)),
            Point::on_edge(3, 2, Rational::new(1, 3)),
            Point::on_edge(0, 3, Rational::new(2, 3)),
            Point::Vertex(0),
            Point::Vertex(2),
        ]
        .into_iter()
        .collect();
        let text = format_cover(&s);
        let back = parse_cover(&text, &g).unwrap();
        assert_eq!(back, s);
        assert_eq!(format_cover(&back), text);
    }

    #[test]
    fn graph_round_trip() {
        let g = petersen();
        let back = parse_graph(&format_graph(&g)).unwrap();
        assert_eq!(back.edges(), g.edges());
    }

    fn error_line(r: Result<impl std::fmt::Debug>) -> usize {
        match r {
            Err(CoverError::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_lines_report_positions() {
        assert_eq!(error_line(parse_graph("p 2 1\ne 1 3\n")), 2);
        assert_eq!(error_line(parse_graph("c x\np 3 2\ne 1 2\ne 2 1\n")), 4);
        assert_eq!(error_line(parse_graph("p 2 1\ne 1 1\n")), 2);
        assert_eq!(error_line(parse_graph("e 1 2\n")), 1);
        assert_eq!(error_line(parse_graph("p 2 1\nx 1 2\n")), 2);
        assert_eq!(error_line(parse_graph("p 2 2\ne 1 2\n")), 0);
        let g = path(2);
        assert_eq!(error_line(parse_cover("v 1\ni 1 3 1/2\n", &g)), 2);
        assert_eq!(error_line(parse_cover("i 1 2 3/2\n", &g)), 1);
        assert_eq!(error_line(parse_cover("i 1 2 x\n", &g)), 1);
        assert_eq!(error_line(parse_cover("v\n", &g)), 1);
    }
}
