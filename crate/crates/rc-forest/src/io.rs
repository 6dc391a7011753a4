//! Text formats shared by the benchmark CLI and external tooling.
//!
//! * Edge lists: one `u v w` per line.
//! * Vertex weights: one `v w` per line.
//! * Update batches: `+ u v w` to link, `- u v` to cut.
//! * Query batches: `C u v` (connected), `S u p` (subtree), `L u v r`
//!   (LCA), `P u v` (path sum), `M u v` (path minimum), `N v` (nearest
//!   marked); answers are emitted one per line in input order.
//! * MSF streams: edge lines in batches separated by blank lines.
//!
//! Lines starting with `#` are comments. Weights are signed integers.

use crate::error::{Error, Result};

fn parse_fields(line: &str, want: usize, what: &str) -> Result<Vec<i64>> {
    let fields: Vec<i64> = line
        .split_whitespace()
        .map(|f| {
            f.parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad number {f:?} in {what} line {line:?}")))
        })
        .collect::<Result<_>>()?;
    if fields.len() != want {
        return Err(Error::Parse(format!(
            "expected {want} fields in {what} line {line:?}, got {}",
            fields.len()
        )));
    }
    Ok(fields)
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

/// Parses `u v w` lines.
pub fn read_edge_list(text: &str) -> Result<Vec<(usize, usize, i64)>> {
    content_lines(text)
        .map(|line| {
            let f = parse_fields(line, 3, "edge")?;
            Ok((f[0] as usize, f[1] as usize, f[2]))
        })
        .collect()
}

pub fn write_edge_list(edges: &[(usize, usize, i64)]) -> String {
    let mut out = String::new();
    for &(u, v, w) in edges {
        out.push_str(&format!("{u} {v} {w}\n"));
    }
    out
}

/// Parses `v w` lines into a dense weight vector (missing vertices get 0).
pub fn read_vertex_weights(text: &str, n: usize) -> Result<Vec<i64>> {
    let mut weights = vec![0i64; n];
    for line in content_lines(text) {
        let f = parse_fields(line, 2, "vertex weight")?;
        let v = f[0] as usize;
        if v >= n {
            return Err(Error::Parse(format!("vertex {v} out of range in weight file")));
        }
        weights[v] = f[1];
    }
    Ok(weights)
}

/// One line of an update batch file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateLine {
    Link(usize, usize, i64),
    Cut(usize, usize),
}

/// Parses `+ u v w` / `- u v` lines.
pub fn read_update_batch(text: &str) -> Result<Vec<UpdateLine>> {
    content_lines(text)
        .map(|line| {
            let (op, rest) = line.split_at(1);
            match op {
                "+" => {
                    let f = parse_fields(rest, 3, "link")?;
                    Ok(UpdateLine::Link(f[0] as usize, f[1] as usize, f[2]))
                }
                "-" => {
                    let f = parse_fields(rest, 2, "cut")?;
                    Ok(UpdateLine::Cut(f[0] as usize, f[1] as usize))
                }
                other => Err(Error::Parse(format!("unknown update op {other:?}"))),
            }
        })
        .collect()
}

pub fn write_update_batch(lines: &[UpdateLine]) -> String {
    let mut out = String::new();
    for l in lines {
        match *l {
            UpdateLine::Link(u, v, w) => out.push_str(&format!("+ {u} {v} {w}\n")),
            UpdateLine::Cut(u, v) => out.push_str(&format!("- {u} {v}\n")),
        }
    }
    out
}

/// One line of a query batch file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryLine {
    Connected(usize, usize),
    Subtree(usize, usize),
    Lca(usize, usize, usize),
    PathSum(usize, usize),
    PathMin(usize, usize),
    NearestMarked(usize),
}

/// Parses `C u v`, `S u p`, `L u v r`, `P u v`, `M u v`, `N v` lines.
pub fn read_query_batch(text: &str) -> Result<Vec<QueryLine>> {
    content_lines(text)
        .map(|line| {
            let (op, rest) = line.split_at(1);
            match op {
                "C" => {
                    let f = parse_fields(rest, 2, "connectivity query")?;
                    Ok(QueryLine::Connected(f[0] as usize, f[1] as usize))
                }
                "S" => {
                    let f = parse_fields(rest, 2, "subtree query")?;
                    Ok(QueryLine::Subtree(f[0] as usize, f[1] as usize))
                }
                "L" => {
                    let f = parse_fields(rest, 3, "lca query")?;
                    Ok(QueryLine::Lca(f[0] as usize, f[1] as usize, f[2] as usize))
                }
                "P" => {
                    let f = parse_fields(rest, 2, "path sum query")?;
                    Ok(QueryLine::PathSum(f[0] as usize, f[1] as usize))
                }
                "M" => {
                    let f = parse_fields(rest, 2, "path min query")?;
                    Ok(QueryLine::PathMin(f[0] as usize, f[1] as usize))
                }
                "N" => {
                    let f = parse_fields(rest, 1, "nearest query")?;
                    Ok(QueryLine::NearestMarked(f[0] as usize))
                }
                other => Err(Error::Parse(format!("unknown query op {other:?}"))),
            }
        })
        .collect()
}

pub fn write_query_batch(lines: &[QueryLine]) -> String {
    let mut out = String::new();
    for l in lines {
        match *l {
            QueryLine::Connected(u, v) => out.push_str(&format!("C {u} {v}\n")),
            QueryLine::Subtree(u, p) => out.push_str(&format!("S {u} {p}\n")),
            QueryLine::Lca(u, v, r) => out.push_str(&format!("L {u} {v} {r}\n")),
            QueryLine::PathSum(u, v) => out.push_str(&format!("P {u} {v}\n")),
            QueryLine::PathMin(u, v) => out.push_str(&format!("M {u} {v}\n")),
            QueryLine::NearestMarked(v) => out.push_str(&format!("N {v}\n")),
        }
    }
    out
}

/// Parses an MSF stream: batches of `u v w` lines separated by blank
/// lines.
pub fn read_msf_stream(text: &str) -> Result<Vec<Vec<(usize, usize, i64)>>> {
    let mut batches = Vec::new();
    let mut current: Vec<(usize, usize, i64)> = Vec::new();
    for raw in text.lines() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            if !current.is_empty() {
                batches.push(std::mem::take(&mut current));
            }
            continue;
        }
        let f = parse_fields(line, 3, "msf edge")?;
        current.push((f[0] as usize, f[1] as usize, f[2]));
    }
    if !current.is_empty() {
        batches.push(current);
    }
    Ok(batches)
}

pub fn write_msf_stream(batches: &[Vec<(usize, usize, i64)>]) -> String {
    let mut out = String::new();
    for (i, batch) in batches.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&write_edge_list(batch));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let text = "# header\n0 1 5\n1 2 -3\n\n2 3 7\n";
        let edges = read_edge_list(text).unwrap();
        assert_eq!(edges, vec![(0, 1, 5), (1, 2, -3), (2, 3, 7)]);
        assert_eq!(read_edge_list(&write_edge_list(&edges)).unwrap(), edges);
        assert!(read_edge_list("0 1\n").is_err());
        assert!(read_edge_list("0 x 1\n").is_err());
    }

    #[test]
    fn update_batch_round_trip() {
        let text = "+ 0 1 5\n- 2 3\n+ 4 5 9\n";
        let batch = read_update_batch(text).unwrap();
        assert_eq!(
            batch,
            vec![
                UpdateLine::Link(0, 1, 5),
                UpdateLine::Cut(2, 3),
                UpdateLine::Link(4, 5, 9)
            ]
        );
        assert_eq!(read_update_batch(&write_update_batch(&batch)).unwrap(), batch);
    }

    #[test]
    fn query_batch_round_trip() {
        let text = "C 0 1\nS 2 3\nL 4 5 6\nP 7 8\nM 9 10\nN 11\n";
        let batch = read_query_batch(text).unwrap();
        assert_eq!(batch.len(), 6);
        assert_eq!(read_query_batch(&write_query_batch(&batch)).unwrap(), batch);
        assert!(read_query_batch("X 0 1\n").is_err());
    }

    #[test]
    fn msf_stream_batches() {
        let text = "0 1 5\n1 2 3\n\n2 3 4\n\n\n4 5 1\n";
        let batches = read_msf_stream(text).unwrap();
        assert_eq!(batches.len(), 3);
        assert_eq!(batches[1], vec![(2, 3, 4)]);
        assert_eq!(read_msf_stream(&write_msf_stream(&batches)).unwrap(), batches);
    }

    #[test]
    fn vertex_weights() {
        let ws = read_vertex_weights("0 5\n3 -2\n", 4).unwrap();
        assert_eq!(ws, vec![5, 0, 0, -2]);
        assert!(read_vertex_weights("9 1\n", 4).is_err());
    }
}
