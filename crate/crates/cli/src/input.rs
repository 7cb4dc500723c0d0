use std::fs;
use std::io::Read;
use std::path::Path;

use biregular::graphs::{from_edge_list, from_graph6, generate, subdivide};
use biregular::Graph;
use clap::ValueEnum;

use crate::report::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Graph6,
    Edgelist,
}

/// Picks a format from the extension, then from the first data line.
pub fn sniff(path: Option<&Path>, text: &str) -> Format {
    match path.and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("g6" | "graph6") => return Format::Graph6,
        Some("edges" | "edgelist" | "el") => return Format::Edgelist,
        _ => {}
    }
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.split_whitespace().count() == 1 && !l.chars().all(|c| c.is_ascii_digit()) => {
            Format::Graph6
        }
        _ => Format::Edgelist,
    }
}

pub fn parse(text: &str, format: Format) -> Result<Graph, Failure> {
    match format {
        Format::Graph6 => {
            let line = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty())
                .ok_or_else(|| Failure::new("ParseError", "empty graph6 input"))?;
            Ok(from_graph6(line)?)
        }
        Format::Edgelist => Ok(from_edge_list(text)?),
    }
}

pub fn read_graph(path: &Path, format: Option<Format>) -> Result<Graph, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::new("IoError", format!("stdin: {e}")))?;
        buf
    } else {
        fs::read_to_string(path)
            .map_err(|e| Failure::new("IoError", format!("{}: {e}", path.display())))?
    };
    let format = format.unwrap_or_else(|| sniff(Some(path), &text));
    parse(&text, format)
}

pub fn generated(spec: &[String], subdivisions: u8) -> Result<Graph, Failure> {
    let (family, rest) = spec
        .split_first()
        .ok_or_else(|| Failure::new("BadParams", "missing family name"))?;
    let params = rest
        .iter()
        .map(|p| {
            p.parse::<usize>().map_err(|_| {
                Failure::new("BadParams", format!("bad parameter {p:?} for `{family}`"))
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut g = generate(family, &params)?;
    for _ in 0..subdivisions {
        g = subdivide(&g);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sniffing() {
        assert_eq!(sniff(None, "EhEG\n"), Format::Graph6);
        assert_eq!(sniff(None, "# c\n0 1\n1 2\n"), Format::Edgelist);
        assert_eq!(sniff(Some(Path::new("x.g6")), "0 1"), Format::Graph6);
        assert_eq!(sniff(None, "0\n"), Format::Edgelist);
    }

    #[test]
    fn generation() {
        let g = generated(&["petersen".into()], 1).unwrap();
        assert_eq!(g.order(), 25);
        assert!(generated(&["cycle".into(), "x".into()], 0).is_err());
        assert!(generated(&[], 0).is_err());
    }
}
