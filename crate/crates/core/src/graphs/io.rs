//! graph6 and whitespace edge-list formats.
//!
//! graph6 output is header-less: `N(n)` followed by the upper triangle of
//! the adjacency matrix in column order (`x(0,1) x(0,2) x(1,2) x(0,3) …`),
//! packed six bits per byte and offset by 63. The reader also accepts an
//! optional `>>graph6<<` header.

use super::{Graph, GraphError};

const BIAS: u8 = 63;
const HEADER: &str = ">>graph6<<";

fn parse_err(msg: impl Into<String>) -> GraphError {
    GraphError::Parse(msg.into())
}

fn encode_order(n: usize, out: &mut Vec<u8>) {
    if n < 63 {
        out.push(n as u8 + BIAS);
    } else if n < 258_048 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + BIAS);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + BIAS);
        }
    }
}

fn decode_order(bytes: &[u8]) -> Result<(usize, &[u8]), GraphError> {
    let take = |rest: &[u8], k: usize| -> Result<usize, GraphError> {
        if rest.len() < k {
            return Err(parse_err("truncated graph6 size field"));
        }
        Ok(rest[..k]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - BIAS) as usize))
    };
    match bytes {
        [] => Err(parse_err("empty graph6 string")),
        [126, 126, rest @ ..] => Ok((take(rest, 6)?, &rest[6..])),
        [126, rest @ ..] => Ok((take(rest, 3)?, &rest[3..])),
        [b, rest @ ..] => Ok(((b - BIAS) as usize, rest)),
    }
}

/// Encodes `g` as a single graph6 line, without trailing newline.
pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    encode_order(n, &mut out);
    let mut chunk = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            chunk = (chunk << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(chunk + BIAS);
                chunk = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((chunk << (6 - filled)) + BIAS);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

/// Decodes one graph6 line.
pub fn from_graph6(line: &str) -> Result<Graph, GraphError> {
    let line = line.trim();
    let line = line.strip_prefix(HEADER).unwrap_or(line);
    let bytes = line.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(BIAS..=126).contains(&b)) {
        return Err(parse_err(format!("byte {b:#04x} outside the graph6 range")));
    }
    let (n, body) = decode_order(bytes)?;
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(parse_err(format!(
            "graph6 body has {} bytes, expected {expected} for n = {n}",
            body.len()
        )));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - BIAS;
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    if k % 6 != 0 && (body[k / 6] - BIAS) & ((1 << (6 - k % 6)) - 1) != 0 {
        return Err(parse_err("nonzero padding bits in graph6 string"));
    }
    Graph::from_edges(n, &edges)
}

/// Reads `u v` pairs, one per line, 0-based. Blank lines and lines starting
/// with `#` are ignored. The vertex count is one more than the largest id.
pub fn from_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    let mut n = 0;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v] = fields[..] else {
            return Err(parse_err(format!(
                "line {}: expected two vertex ids, found {}",
                lineno + 1,
                fields.len()
            )));
        };
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| parse_err(format!("line {}: `{s}`: {e}", lineno + 1)))
        };
        let (u, v) = (parse(u)?, parse(v)?);
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v));
    }
    Graph::from_edges(n, &edges)
}

pub fn to_edge_list(g: &Graph) -> String {
    g.edges()
        .into_iter()
        .map(|(u, v)| format!("{u} {v}\n"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{generate, subdivide};

    // reference strings produced by networkx.to_graph6_bytes(header=False)
    #[test]
    fn known_encodings() {
        let cases = [
            (generate("cycle", &[6]).unwrap(), "EhEG"),
            (generate("complete_bipartite", &[2, 3]).unwrap(), "D]o"),
            (generate("path", &[2]).unwrap(), "A_"),
            (generate("path", &[3]).unwrap(), "Bg"),
            (generate("petersen", &[]).unwrap(), "IheA@GUAo"),
            (generate("hypercube", &[3]).unwrap(), "Gr`HOk"),
            (
                subdivide(&generate("petersen", &[]).unwrap()),
                "X???????E?P?`?W?GO@_?GO?W??`??O_?D??@G??D???Q???S??",
            ),
            (
                Graph::from_edges(5, &[(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap(),
                "DQc",
            ),
        ];
        for (g, expected) in cases {
            assert_eq!(to_graph6(&g), expected);
            assert_eq!(from_graph6(expected).unwrap(), g);
        }
    }

    #[test]
    fn long_size_field() {
        let p70 = generate("path", &[70]).unwrap();
        let s = to_graph6(&p70);
        assert!(s.starts_with("~?@EhCGG"));
        assert_eq!(s.len(), 407);
        assert_eq!(from_graph6(&s).unwrap(), p70);
    }

    #[test]
    fn header_and_whitespace() {
        assert_eq!(
            from_graph6(">>graph6<<EhEG\n").unwrap(),
            generate("cycle", &[6]).unwrap()
        );
    }

    #[test]
    fn malformed_graph6() {
        assert!(from_graph6("").is_err());
        assert!(from_graph6("Eh").is_err());
        assert!(from_graph6("EhEG?").is_err());
        assert!(from_graph6("Bh").is_err()); // padding bit set
        assert!(from_graph6("B\x07").is_err());
    }

    #[test]
    fn empty_and_single_vertex() {
        assert_eq!(to_graph6(&Graph::from_edges(0, &[]).unwrap()), "?");
        assert_eq!(to_graph6(&Graph::from_edges(1, &[]).unwrap()), "@");
        assert_eq!(from_graph6("@").unwrap().order(), 1);
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = generate("complete_bipartite", &[2, 3]).unwrap();
        let text = to_edge_list(&g);
        assert_eq!(text.lines().count(), 6);
        assert_eq!(from_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            from_edge_list("0 1\n1 x\n"),
            Err(GraphError::Parse(_))
        ));
        assert!(matches!(
            from_edge_list("0 1 2\n"),
            Err(GraphError::Parse(_))
        ));
        assert_eq!(from_edge_list("2 2\n"), Err(GraphError::LoopEdge(2)));
        let g = from_edge_list("# triangle-free\n\n0 1\n1 2\n").unwrap();
        assert_eq!(g.order(), 3);
    }
}
