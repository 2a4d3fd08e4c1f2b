//! Text formats: graph6, the `sg1` signed edge list and weighing matrices.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::graph::{SignedGraph, UnderlyingGraph};
use crate::linalg::IntMatrix;
use crate::weighing::{verify_weighing, WeighingMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Graph6Error {
    #[error("empty input")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} is outside the printable range 63..=126")]
    NonPrintable { offset: usize, byte: u8 },
    #[error("malformed size field")]
    MalformedLength,
    #[error("truncated: expected {expected} data bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("padding bits in the last byte are not zero")]
    TrailingBits,
    #[error("{0} unexpected bytes after the graph")]
    TrailingBytes(usize),
}

const HEADER: &[u8] = b">>graph6<<";

/// Parses one graph6 record. A leading `>>graph6<<` header and a trailing
/// newline are accepted.
pub fn parse_graph6(bytes: &[u8]) -> Result<UnderlyingGraph, Graph6Error> {
    let mut data = bytes.strip_prefix(HEADER).unwrap_or(bytes);
    while let Some((&last, rest)) = data.split_last() {
        if last == b'\n' || last == b'\r' {
            data = rest;
        } else {
            break;
        }
    }
    if data.is_empty() {
        return Err(Graph6Error::Empty);
    }
    if let Some(offset) = data.iter().position(|&b| !(63..=126).contains(&b)) {
        return Err(Graph6Error::NonPrintable { offset, byte: data[offset] });
    }
    let (n, body) = parse_size(data)?;
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() < expected {
        return Err(Graph6Error::Truncated { expected, found: body.len() });
    }
    if body.len() > expected {
        return Err(Graph6Error::TrailingBytes(body.len() - expected));
    }
    let pad = expected * 6 - bits;
    if pad > 0 && ((body[expected - 1] - 63) & ((1u8 << pad) - 1)) != 0 {
        return Err(Graph6Error::TrailingBits);
    }
    let mut g = UnderlyingGraph::empty(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

fn parse_size(data: &[u8]) -> Result<(usize, &[u8]), Graph6Error> {
    let six = |s: &[u8]| s.iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
    if data[0] != 126 {
        return Ok(((data[0] - 63) as usize, &data[1..]));
    }
    if data.len() >= 2 && data[1] == 126 {
        if data.len() < 8 {
            return Err(Graph6Error::MalformedLength);
        }
        let n = six(&data[2..8]);
        if n <= 258047 {
            return Err(Graph6Error::MalformedLength);
        }
        return Ok((n, &data[8..]));
    }
    if data.len() < 4 {
        return Err(Graph6Error::MalformedLength);
    }
    let n = six(&data[1..4]);
    if n <= 62 {
        return Err(Graph6Error::MalformedLength);
    }
    Ok((n, &data[4..]))
}

/// graph6 encoding without header or newline.
pub fn write_graph6(g: &UnderlyingGraph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258047 {
        out.push(126);
        for s in [12, 6, 0] {
            out.push(((n >> s) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for s in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> s) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            k += 1;
            if k == 6 {
                out.push(acc + 63);
                acc = 0;
                k = 0;
            }
        }
    }
    if k > 0 {
        out.push((acc << (6 - k)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

/// One graph per non-empty line.
pub fn parse_graph6_lines(text: &str) -> Result<Vec<UnderlyingGraph>, (usize, Graph6Error)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_graph6(l.trim().as_bytes()).map_err(|e| (i + 1, e)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignedFormatError {
    #[error("missing or malformed header, expected `sg1 <n>`")]
    BadHeader,
    #[error("line {line}: expected `u v +` or `u v -`")]
    BadLine { line: usize },
    #[error("line {line}: bad sign token `{token}`")]
    BadSign { line: usize, token: String },
    #[error("line {line}: vertex {vertex} out of range for {n} vertices")]
    OutOfRange { line: usize, vertex: usize, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
}

/// Parses the `sg1` format: a header `sg1 n`, then one `u v ±` line per edge.
/// Lines starting with `#` and blank lines are ignored.
pub fn parse_signed(text: &str) -> Result<SignedGraph, SignedFormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or(SignedFormatError::BadHeader)?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some("sg1") {
        return Err(SignedFormatError::BadHeader);
    }
    let n: usize = parts.next().and_then(|t| t.parse().ok()).ok_or(SignedFormatError::BadHeader)?;
    if parts.next().is_some() {
        return Err(SignedFormatError::BadHeader);
    }
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(SignedFormatError::BadLine { line });
        }
        let u: usize = toks[0].parse().map_err(|_| SignedFormatError::BadLine { line })?;
        let v: usize = toks[1].parse().map_err(|_| SignedFormatError::BadLine { line })?;
        let s: i8 = match toks[2] {
            "+" | "+1" => 1,
            "-" | "-1" => -1,
            t => return Err(SignedFormatError::BadSign { line, token: t.to_string() }),
        };
        for vertex in [u, v] {
            if vertex >= n {
                return Err(SignedFormatError::OutOfRange { line, vertex, n });
            }
        }
        if u == v {
            return Err(SignedFormatError::SelfLoop { line, vertex: u });
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(SignedFormatError::DuplicateEdge { line, u: key.0, v: key.1 });
        }
        edges.push((u, v, s));
    }
    Ok(SignedGraph::from_edges(n, &edges).expect("validated above"))
}

/// Canonical `sg1` text: edges with `u < v` in row-major order.
pub fn write_signed(g: &SignedGraph) -> String {
    let mut out = format!("sg1 {}\n", g.n());
    for (u, v, s) in g.edges() {
        let _ = writeln!(out, "{u} {v} {}", if s > 0 { '+' } else { '-' });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeighingFormatError {
    #[error("missing or malformed header, expected `n r`")]
    BadHeader,
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row} has length {len}, expected {n}")]
    RowLength { row: usize, len: usize, n: usize },
    #[error("row {row}: character `{ch}` is not one of + - 0")]
    BadChar { row: usize, ch: char },
    #[error("not a weighing matrix: {0}")]
    NotWeighing(String),
    #[error("header weight {header} but the matrix has weight {actual}")]
    WeightMismatch { header: usize, actual: usize },
}

/// Parses `n r` followed by `n` rows over `+`, `-`, `0`.
pub fn parse_weighing(text: &str) -> Result<WeighingMatrix, WeighingFormatError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or(WeighingFormatError::BadHeader)?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| WeighingFormatError::BadHeader))
        .collect::<Result<_, _>>()?;
    let [n, r] = nums[..] else {
        return Err(WeighingFormatError::BadHeader);
    };
    let rows: Vec<&str> = lines.collect();
    if rows.len() != n {
        return Err(WeighingFormatError::RowCount { expected: n, found: rows.len() });
    }
    let mut m = IntMatrix::zeros(n);
    for (i, row) in rows.iter().enumerate() {
        let chars: Vec<char> = row.chars().collect();
        if chars.len() != n {
            return Err(WeighingFormatError::RowLength { row: i, len: chars.len(), n });
        }
        for (j, &ch) in chars.iter().enumerate() {
            m[(i, j)] = match ch {
                '+' => 1,
                '-' => -1,
                '0' => 0,
                _ => return Err(WeighingFormatError::BadChar { row: i, ch }),
            };
        }
    }
    let w = verify_weighing(&m).map_err(|e| WeighingFormatError::NotWeighing(e.to_string()))?;
    if w.weight() != r {
        return Err(WeighingFormatError::WeightMismatch { header: r, actual: w.weight() });
    }
    Ok(w)
}

pub fn write_weighing(w: &WeighingMatrix) -> String {
    let n = w.n();
    let mut out = format!("{} {}\n", n, w.weight());
    for i in 0..n {
        for j in 0..n {
            out.push(match w.entry(i, j) {
                1 => '+',
                -1 => '-',
                _ => '0',
            });
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{hypercube, signed_cube};

    #[test]
    fn graph6_k2() {
        let g = parse_graph6(b"A_").unwrap();
        assert_eq!(g.edges(), vec![(0, 1)]);
        assert_eq!(write_graph6(&g), "A_");
        assert_eq!(parse_graph6(b">>graph6<<A_\n").unwrap(), g);
        assert_eq!(write_graph6(&UnderlyingGraph::empty(0)), "?");
    }

    #[test]
    fn graph6_round_trip_sizes() {
        for n in [1, 5, 62, 63, 64, 100] {
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if (u * 7 + v * 3) % 5 == 0 {
                        edges.push((u, v));
                    }
                }
            }
            let g = UnderlyingGraph::from_edges(n, &edges).unwrap();
            let s = write_graph6(&g);
            assert_eq!(parse_graph6(s.as_bytes()).unwrap(), g, "n = {n}");
        }
        let q4 = hypercube(4);
        assert_eq!(parse_graph6(write_graph6(&q4).as_bytes()).unwrap(), q4);
    }

    #[test]
    fn graph6_errors() {
        assert_eq!(parse_graph6(b""), Err(Graph6Error::Empty));
        assert_eq!(parse_graph6(b"C"), Err(Graph6Error::Truncated { expected: 1, found: 0 }));
        assert_eq!(parse_graph6(b"A`"), Err(Graph6Error::TrailingBits));
        assert_eq!(parse_graph6(b"A_?"), Err(Graph6Error::TrailingBytes(1)));
        assert!(matches!(parse_graph6(b"A\x01"), Err(Graph6Error::NonPrintable { offset: 1, .. })));
        assert_eq!(parse_graph6(b"~?"), Err(Graph6Error::MalformedLength));
        // a three-byte size field must encode n > 62
        assert_eq!(parse_graph6(b"~???"), Err(Graph6Error::MalformedLength));
    }

    #[test]
    fn signed_format() {
        let g = parse_signed("sg1 2\n0 1 +\n").unwrap();
        assert_eq!(g.entry(0, 1), 1);
        let g4 = signed_cube(4).unwrap();
        assert_eq!(parse_signed(&write_signed(&g4)).unwrap(), g4);
        assert!(matches!(
            parse_signed("sg1 2\n0 1 +\n0 1 -\n"),
            Err(SignedFormatError::DuplicateEdge { line: 3, u: 0, v: 1 })
        ));
        assert!(matches!(parse_signed("sg1 2\n0 2 +\n"), Err(SignedFormatError::OutOfRange { .. })));
        assert!(matches!(parse_signed("sg1 2\n0 1 x\n"), Err(SignedFormatError::BadSign { .. })));
        assert!(matches!(parse_signed("sg 2\n"), Err(SignedFormatError::BadHeader)));
        assert!(matches!(parse_signed("sg1 2\n1 1 +\n"), Err(SignedFormatError::SelfLoop { .. })));
    }

    #[test]
    fn weighing_format() {
        let w = parse_weighing("2 2\n++\n+-\n").unwrap();
        assert_eq!(w.weight(), 2);
        assert_eq!(parse_weighing(&write_weighing(&w)).unwrap(), w);
        assert!(matches!(parse_weighing("2 2\n++\n+\n"), Err(WeighingFormatError::RowLength { .. })));
        assert!(matches!(parse_weighing("2 2\n++\n+x\n"), Err(WeighingFormatError::BadChar { .. })));
        assert!(matches!(parse_weighing("2 2\n++\n++\n"), Err(WeighingFormatError::NotWeighing(_))));
        assert!(matches!(
            parse_weighing("2 1\n++\n+-\n"),
            Err(WeighingFormatError::WeightMismatch { header: 1, actual: 2 })
        ));
    }
}
