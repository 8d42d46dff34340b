//! Plain-text structure blocks.
//!
//! ```text
//! structure star
//! vertices 4
//! edge 0 1
//! edge 0 2
//! sclass 1 2
//! end
//! ```

use super::graph::FiniteStructure;
use super::vertex_set::VertexSet;
use crate::error::{input, Result};
use std::fmt::Write;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedStructure {
    pub name: String,
    pub structure: FiniteStructure,
}

/// Parses every block in `text`. `#` starts a comment.
pub fn parse_structures(text: &str) -> Result<Vec<NamedStructure>> {
    let mut out = Vec::new();
    let mut current: Option<(String, Option<FiniteStructure>, Vec<VertexSet>)> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| crate::Error::Input(format!("line {}: {msg}", lineno + 1));
        let mut words = line.split_whitespace();
        let key = words.next().unwrap_or("");
        let args: Vec<&str> = words.collect();
        let nums = || -> Result<Vec<usize>> {
            args.iter()
                .map(|a| a.parse::<usize>().map_err(|_| at(format!("bad number `{a}`"))))
                .collect()
        };
        match (key, current.as_mut()) {
            ("structure", None) => {
                let name = args.join(" ");
                current = Some((if name.is_empty() { "unnamed".into() } else { name }, None, Vec::new()));
            }
            ("structure", Some(_)) => return Err(at("nested `structure` (missing `end`)".into())),
            (_, None) => return Err(at(format!("`{key}` outside a structure block"))),
            ("vertices", Some((_, s, _))) => {
                let v = nums()?;
                if v.len() != 1 || s.is_some() {
                    return Err(at("`vertices` takes one count, once per block".into()));
                }
                *s = Some(FiniteStructure::new(v[0]).map_err(|e| at(e.to_string()))?);
            }
            ("edge", Some((_, s, _))) => {
                let v = nums()?;
                let s = s.as_mut().ok_or_else(|| at("`edge` before `vertices`".into()))?;
                if v.len() != 2 {
                    return Err(at("`edge` takes two vertices".into()));
                }
                s.add_edge(v[0], v[1]).map_err(|e| at(e.to_string()))?;
            }
            ("sclass", Some((_, s, blocks))) => {
                if s.is_none() {
                    return Err(at("`sclass` before `vertices`".into()));
                }
                blocks.push(nums()?.into_iter().collect());
            }
            ("end", Some(_)) => {
                let (name, s, blocks) = current.take().expect("open block");
                let mut s = s.ok_or_else(|| at(format!("structure `{name}` has no `vertices` line")))?;
                if !blocks.is_empty() {
                    s.set_partition(&blocks).map_err(|e| at(e.to_string()))?;
                }
                out.push(NamedStructure { name, structure: s });
            }
            (other, Some(_)) => return Err(at(format!("unknown keyword `{other}`"))),
        }
    }
    if current.is_some() {
        return input("unterminated structure block (missing `end`)");
    }
    Ok(out)
}

/// Parses text that must contain exactly one block.
pub fn parse_single(text: &str) -> Result<FiniteStructure> {
    let mut all = parse_structures(text)?;
    match all.len() {
        1 => Ok(all.pop().expect("one block").structure),
        k => input(format!("expected one structure block, found {k}")),
    }
}

/// Writes one block. Only non-singleton classes are listed.
pub fn format_structure(name: &str, s: &FiniteStructure) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "structure {name}");
    let _ = writeln!(out, "vertices {}", s.n());
    for (u, v) in s.edges() {
        let _ = writeln!(out, "edge {u} {v}");
    }
    if s.has_partition() {
        for b in s.blocks().into_iter().filter(|b| b.len() > 1) {
            let list: Vec<String> = b.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "sclass {}", list.join(" "));
        }
    }
    out.push_str("end\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut s = FiniteStructure::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        s.set_partition(&[VertexSet::parse("0,3").unwrap()]).unwrap();
        let text = format_structure("p4", &s);
        let back = parse_structures(&text).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].name, "p4");
        assert_eq!(back[0].structure, s);
    }

    #[test]
    fn comments_and_multiple_blocks() {
        let text = "# two graphs\nstructure a\nvertices 2\nedge 0 1 # an edge\nend\n\nstructure b\nvertices 0\nend\n";
        let all = parse_structures(text).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[1].structure.n(), 0);
    }

    #[test]
    fn errors_are_located() {
        for bad in [
            "structure x\nvertices 2\nedge 0 2\nend\n",
            "structure x\nedge 0 1\nend\n",
            "structure x\nvertices 2\n",
            "vertices 2\n",
            "structure x\nvertices 3\nsclass 0 1\nsclass 1 2\nend\n",
            "structure x\nvertices 2\nfoo\nend\n",
        ] {
            assert!(parse_structures(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn single_block_required() {
        assert!(parse_single("").is_err());
        assert!(parse_single("structure a\nvertices 1\nend\n").is_ok());
    }
}
