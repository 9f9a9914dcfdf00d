//! Generators for the concrete combinatorial instances: subgraph counts in
//! random k-uniform hypergraphs, arithmetic progressions and Schur triples
//! in random integer subsets.

pub mod kgraph;
pub mod sequences;
pub mod subgraph;

pub use kgraph::{GraphCopy, KGraph};
pub use sequences::{ap_family, schur_family};
pub use subgraph::{subgraph_family, SubgraphInstance, TuranData};

use crate::error::{Error, Result};

/// Parse the k-graph text format: first line `k v`, then one edge per
/// line as k vertex indices (0-based). `#` starts a comment.
pub fn parse_kgraph(text: &str, path: &str) -> Result<KGraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    path: path.into(),
                    line: lineno + 1,
                    msg: format!("bad integer {t:?}"),
                })
            })
            .collect::<Result<_>>()?;
        match header {
            None => {
                if nums.len() != 2 {
                    return Err(Error::Parse {
                        path: path.into(),
                        line: lineno + 1,
                        msg: "header must be `k v`".into(),
                    });
                }
                header = Some((nums[0], nums[1]));
            }
            Some((k, _)) => {
                if nums.len() != k {
                    return Err(Error::Parse {
                        path: path.into(),
                        line: lineno + 1,
                        msg: format!("edge needs exactly {k} vertices"),
                    });
                }
                edges.push(nums);
            }
        }
    }
    let (k, v) = header.ok_or_else(|| Error::Parse {
        path: path.into(),
        line: 1,
        msg: "missing `k v` header".into(),
    })?;
    KGraph::new(k, v, edges)
}

pub fn kgraph_from_file(path: &std::path::Path) -> Result<KGraph> {
    let text = std::fs::read_to_string(path)?;
    parse_kgraph(&text, &path.display().to_string())
}

/// Render in the format `parse_kgraph` accepts.
pub fn kgraph_to_string(g: &KGraph) -> String {
    let mut out = format!("{} {}\n", g.k(), g.vertex_count());
    for e in g.edges() {
        let toks: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        out.push_str(&toks.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kgraph_text_roundtrip() {
        let g = KGraph::complete(2, 4).unwrap();
        let text = kgraph_to_string(&g);
        let back = parse_kgraph(&text, "mem").unwrap();
        assert_eq!(g, back);

        let with_comment = "# triangle\n2 3\n0 1\n1 2\n0 2\n";
        let t = parse_kgraph(with_comment, "mem").unwrap();
        assert_eq!(t.edge_count(), 3);

        assert!(parse_kgraph("2\n0 1\n", "mem").is_err());
        assert!(parse_kgraph("2 3\n0 1 2\n", "mem").is_err());
    }
}
