//! Text formats: edge lists, partitions, flip specs, weights, vertex lists,
//! set families, DOT and CSV.
//!
//! Blank lines and lines starting with `#` are ignored by every reader.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::flip::{FlipSpec, Partition};
use crate::graph::{vertex_set, Bipartite, Graph};
use crate::metric::SetFamily;
use crate::weights::WeightFn;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn numbers<T: std::str::FromStr>(line: usize, s: &str) -> Result<Vec<T>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| parse_err(line, format!("bad number {t:?}"))))
        .collect()
}

fn two<T: std::str::FromStr + Copy>(line: usize, s: &str) -> Result<(T, T)> {
    match numbers::<T>(line, s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(parse_err(line, "expected two numbers")),
    }
}

/// Reads `n m` followed by `m` lines `u v`.
pub fn read_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let (n, m) = two::<usize>(hl, header)?;
    read_edges(n, m, lines)
}

fn read_edges<'a>(n: usize, m: usize, lines: impl Iterator<Item = (usize, &'a str)>) -> Result<Graph> {
    let mut g = Graph::empty(n);
    let mut count = 0;
    for (ln, l) in lines {
        let (u, v) = two::<usize>(ln, l)?;
        if u >= n || v >= n {
            return Err(parse_err(ln, format!("vertex out of range for n = {n}")));
        }
        if u == v {
            return Err(parse_err(ln, "self-loop"));
        }
        g.set_edge(u, v, true);
        count += 1;
    }
    if count != m {
        return Err(parse_err(1, format!("header announces {m} edges, found {count}")));
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Edge-list format with a second header line `U: i j k ...` naming the
/// left side.
pub fn read_bipartite(text: &str) -> Result<Bipartite> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let (n, m) = two::<usize>(hl, header)?;
    let (sl, side) = lines.next().ok_or_else(|| parse_err(hl + 1, "missing `U:` line"))?;
    let rest = side
        .strip_prefix("U:")
        .ok_or_else(|| parse_err(sl, "expected `U:` line"))?;
    let left = numbers::<usize>(sl, rest)?;
    let left = vertex_set(n, &left).map_err(|e| parse_err(sl, e.to_string()))?;
    let g = read_edges(n, m, lines)?;
    Bipartite::new(g, left)
}

pub fn write_bipartite(b: &Bipartite) -> String {
    let g = b.graph();
    let left: Vec<String> = b.left().iter().map(ToString::to_string).collect();
    let mut out = format!("{} {}\nU: {}\n", g.n(), g.edge_count(), left.join(" "));
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Lines `v part_id`; every vertex of `0..n` must appear exactly once.
pub fn read_partition(text: &str, n: usize) -> Result<Partition> {
    let mut labels: Vec<Option<String>> = vec![None; n];
    for (ln, l) in content_lines(text) {
        let mut it = l.split_whitespace();
        let (Some(v), Some(id), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err(ln, "expected `v part_id`"));
        };
        let v: usize = v.parse().map_err(|_| parse_err(ln, format!("bad vertex {v:?}")))?;
        if v >= n {
            return Err(parse_err(ln, format!("vertex {v} out of range for n = {n}")));
        }
        if labels[v].replace(id.to_string()).is_some() {
            return Err(parse_err(ln, format!("vertex {v} listed twice")));
        }
    }
    if let Some(v) = labels.iter().position(Option::is_none) {
        return Err(parse_err(1, format!("vertex {v} has no part")));
    }
    let labels: Vec<String> = labels.into_iter().map(|l| l.expect("checked")).collect();
    Ok(Partition::from_labels(&labels))
}

/// Writes canonical part indices.
pub fn write_partition(p: &Partition) -> String {
    let mut out = String::new();
    for (v, part) in p.labels().iter().enumerate() {
        let _ = writeln!(out, "{v} {part}");
    }
    out
}

/// Lines `i j` of flipped part pairs.
pub fn read_spec(text: &str) -> Result<FlipSpec> {
    let mut pairs = Vec::new();
    for (ln, l) in content_lines(text) {
        pairs.push(two::<usize>(ln, l)?);
    }
    Ok(FlipSpec::from_pairs(pairs))
}

pub fn write_spec(s: &FlipSpec) -> String {
    s.pairs().fold(String::new(), |mut out, (i, j)| {
        let _ = writeln!(out, "{i} {j}");
        out
    })
}

/// Lines `v weight`; unlisted vertices weigh 0.
pub fn read_weights(text: &str, n: usize) -> Result<WeightFn> {
    let mut w = vec![0.0; n];
    let mut seen = vec![false; n];
    for (ln, l) in content_lines(text) {
        let mut it = l.split_whitespace();
        let (Some(v), Some(x), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err(ln, "expected `v weight`"));
        };
        let v: usize = v.parse().map_err(|_| parse_err(ln, format!("bad vertex {v:?}")))?;
        let x: f64 = x.parse().map_err(|_| parse_err(ln, format!("bad weight {x:?}")))?;
        if v >= n {
            return Err(parse_err(ln, format!("vertex {v} out of range for n = {n}")));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(parse_err(ln, format!("vertex {v} listed twice")));
        }
        w[v] = x;
    }
    WeightFn::new(w)
}

pub fn write_weights(w: &WeightFn) -> String {
    let mut out = String::new();
    for (v, x) in w.weights().iter().enumerate() {
        let _ = writeln!(out, "{v} {x}");
    }
    out
}

/// Vertex ids separated by whitespace or commas, over any number of lines.
pub fn read_vertex_list(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (ln, l) in content_lines(text) {
        out.extend(numbers::<usize>(ln, l)?);
    }
    Ok(out)
}

pub fn write_vertex_list(vs: &[usize]) -> String {
    let items: Vec<String> = vs.iter().map(ToString::to_string).collect();
    format!("{}\n", items.join(" "))
}

/// Parses `"0,3,5"`; the empty string is the empty set.
pub fn parse_set(s: &str) -> Result<Vec<usize>> {
    numbers(1, s)
}

/// One set per line. A line `-` stands for the empty set.
pub fn read_family(text: &str) -> Result<SetFamily> {
    let mut sets = Vec::new();
    for (ln, l) in content_lines(text) {
        sets.push(if l == "-" { vec![] } else { numbers::<usize>(ln, l)? });
    }
    Ok(SetFamily::new(sets))
}

pub fn write_family(f: &SetFamily) -> String {
    let mut out = String::new();
    for s in f.sets() {
        if s.is_empty() {
            out.push_str("-\n");
        } else {
            out.push_str(&write_vertex_list(s));
        }
    }
    out
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

/// Undirected DOT; vertices are filled by part when a partition is given.
pub fn export_dot(g: &Graph, parts: Option<&Partition>) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        match parts {
            Some(p) => {
                let part = p.part_of(v);
                let _ = writeln!(
                    out,
                    "  {v} [style=filled, fillcolor=\"{}\", part={part}];",
                    PALETTE[part % PALETTE.len()]
                );
            }
            None => {
                let _ = writeln!(out, "  {v};");
            }
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

/// Renders a header and rows as CSV.
pub fn csv_string<S: AsRef<str>>(header: &[&str], rows: &[Vec<S>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::domain(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row.iter().map(AsRef::as_ref)).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::domain(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
