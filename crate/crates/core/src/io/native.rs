//! Native text format:
//!
//! ```text
//! gmg 1 <order> <vertex mode> <edge mode>
//! v <i> <attr...>
//! e <i> <j> <attr...>
//! ```
//!
//! Modes are `label`, `vector:<m>` or, for edges only, `unlabeled` (no
//! attribute tokens; edges read back with label 1). Vertex indices are 1-based.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::{Attribute, AttributeKind, AttributedGraph};

const VERSION: &str = "1";

fn mode_token(kind: Option<AttributeKind>) -> String {
    match kind {
        None | Some(AttributeKind::Label) => "label".into(),
        Some(AttributeKind::Vector(m)) => format!("vector:{m}"),
    }
}

fn write_attr(out: &mut String, a: &Attribute) {
    match a {
        Attribute::Label(l) => write!(out, " {l}").unwrap(),
        Attribute::Vector(v) => v.iter().for_each(|x| write!(out, " {x}").unwrap()),
    }
}

/// Serializes `g`; the graph id is not stored.
pub fn write_graph(g: &AttributedGraph) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "gmg {VERSION} {} {} {}",
        g.order(),
        mode_token(g.vertex_kind()),
        mode_token(g.edge_kind())
    )
    .unwrap();
    for (i, a) in g.vertex_attrs().iter().enumerate() {
        write!(out, "v {}", i + 1).unwrap();
        write_attr(&mut out, a);
        out.push('\n');
    }
    for (i, j, a) in g.edges() {
        write!(out, "e {} {}", i + 1, j + 1).unwrap();
        write_attr(&mut out, a);
        out.push('\n');
    }
    out
}

#[derive(Clone, Copy)]
enum Mode {
    Label,
    Vector(usize),
    Unlabeled,
}

fn parse_mode(token: &str, allow_unlabeled: bool) -> Option<Mode> {
    match token {
        "label" => Some(Mode::Label),
        "unlabeled" if allow_unlabeled => Some(Mode::Unlabeled),
        _ => token
            .strip_prefix("vector:")
            .and_then(|m| m.parse().ok())
            .map(Mode::Vector),
    }
}

fn parse_attr(tokens: &[&str], mode: Mode, line: usize) -> Result<Attribute> {
    let bad = |msg: String| Error::MalformedLine { line, msg };
    match mode {
        Mode::Unlabeled => {
            if !tokens.is_empty() {
                return Err(bad("unlabeled edges take no attribute".into()));
            }
            Ok(Attribute::Label(1))
        }
        Mode::Label => match tokens {
            [l] => l
                .parse()
                .map(Attribute::Label)
                .map_err(|_| bad(format!("bad label `{l}`"))),
            _ => Err(bad(format!(
                "expected one label, found {} tokens",
                tokens.len()
            ))),
        },
        Mode::Vector(m) => {
            if tokens.len() != m {
                return Err(bad(format!(
                    "expected {m} coordinates, found {}",
                    tokens.len()
                )));
            }
            tokens
                .iter()
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|_| bad(format!("bad coordinate `{t}`")))
                })
                .collect::<Result<_>>()
                .map(Attribute::Vector)
        }
    }
}

fn parse_index(token: &str, order: usize, line: usize) -> Result<usize> {
    match token.parse::<usize>() {
        Ok(i) if (1..=order).contains(&i) => Ok(i - 1),
        _ => Err(Error::MalformedLine {
            line,
            msg: format!("vertex index `{token}` not in 1..={order}"),
        }),
    }
}

/// Parses the native format. The returned graph has an empty id.
pub fn read_graph(text: &str) -> Result<AttributedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::MalformedLine {
        line: 1,
        msg: "missing header".into(),
    })?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.first() != Some(&"gmg") || h.len() != 5 {
        return Err(Error::MalformedLine {
            line: hline,
            msg: "expected `gmg <version> <order> <vertex mode> <edge mode>`".into(),
        });
    }
    if h[1] != VERSION {
        return Err(Error::UnsupportedVersion(h[1].to_string()));
    }
    let bad_header = |msg: &str| Error::MalformedLine {
        line: hline,
        msg: msg.to_string(),
    };
    let order: usize = h[2].parse().map_err(|_| bad_header("bad order"))?;
    let vmode = parse_mode(h[3], false).ok_or_else(|| bad_header("bad vertex mode"))?;
    let emode = parse_mode(h[4], true).ok_or_else(|| bad_header("bad edge mode"))?;

    let mut vertices: Vec<Option<Attribute>> = vec![None; order];
    let mut edges = Vec::new();
    for (line, l) in lines {
        let tokens: Vec<&str> = l.split_whitespace().collect();
        match tokens[0] {
            "v" if tokens.len() >= 2 => {
                let i = parse_index(tokens[1], order, line)?;
                if vertices[i].is_some() {
                    return Err(Error::MalformedLine {
                        line,
                        msg: format!("vertex {} defined twice", i + 1),
                    });
                }
                vertices[i] = Some(parse_attr(&tokens[2..], vmode, line)?);
            }
            "e" if tokens.len() >= 3 => {
                let i = parse_index(tokens[1], order, line)?;
                let j = parse_index(tokens[2], order, line)?;
                edges.push((i, j, parse_attr(&tokens[3..], emode, line)?));
            }
            _ => {
                return Err(Error::MalformedLine {
                    line,
                    msg: format!("unexpected `{l}`"),
                })
            }
        }
    }
    let vertices = vertices
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::MalformedLine {
                line: hline,
                msg: format!("vertex {} missing", i + 1),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    AttributedGraph::new("", vertices, edges)
}
