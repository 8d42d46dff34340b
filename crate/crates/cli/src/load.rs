//! Reading structure files, vertex lists and witness configurations.

use genera_core::amalgam::WitnessConfig;
use genera_core::structures::{parse_single, parse_structures};
use genera_core::{ClassSpec, Error, FiniteStructure, Result, VertexId, VertexSet};
use std::collections::HashMap;
use std::path::Path;

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn read_structure(path: &Path) -> Result<FiniteStructure> {
    parse_single(&read_text(path)?)
}

pub fn set_in(text: &str, g: &FiniteStructure) -> Result<VertexSet> {
    let s = VertexSet::parse(text)?;
    s.check_within(g.n())?;
    Ok(s)
}

/// An ordered comma-separated vertex list.
pub fn tuple(text: &str) -> Result<Vec<VertexId>> {
    text.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|_| Error::Input(format!("bad vertex `{p}`"))))
        .collect()
}

/// A witness configuration file: `key value` lines (`spec`, `a`, `u`, `v`,
/// `n_max`, optional `placement`) plus structure blocks named `B` and `X`.
///
/// ```text
/// spec K+:1/2
/// a 0,1
/// u 2
/// v
/// n_max 0
/// structure B
/// vertices 3
/// edge 0 2
/// edge 1 2
/// end
/// structure X
/// vertices 3
/// edge 0 2
/// edge 1 2
/// end
/// ```
pub fn witness_config(text: &str) -> Result<WitnessConfig> {
    let mut keys: HashMap<String, String> = HashMap::new();
    let mut blocks = String::new();
    let mut in_block = false;
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        if key == "structure" {
            in_block = true;
        }
        if in_block {
            blocks.push_str(line);
            blocks.push('\n');
            in_block = key != "end";
            continue;
        }
        if keys.insert(key.to_string(), rest.trim().to_string()).is_some() {
            return Err(Error::Input(format!("key `{key}` given twice")));
        }
    }
    let mut named: HashMap<String, FiniteStructure> =
        parse_structures(&blocks)?.into_iter().map(|n| (n.name, n.structure)).collect();
    let mut take = |name: &str| named.remove(name).ok_or_else(|| Error::Input(format!("missing structure `{name}`")));
    let b = take("B")?;
    let x = take("X")?;
    let get = |k: &str| keys.get(k).map(String::as_str);
    let spec = ClassSpec::parse(get("spec").ok_or_else(|| Error::Input("missing `spec`".into()))?)?;
    let n_max = match get("n_max") {
        None => 0,
        Some(t) => t.parse().map_err(|_| Error::Input(format!("bad n_max `{t}`")))?,
    };
    let set = |k: &str| set_in(get(k).unwrap_or(""), &b);
    for k in keys.keys() {
        if !["spec", "a", "u", "v", "n_max", "placement"].contains(&k.as_str()) {
            return Err(Error::Input(format!("unknown key `{k}`")));
        }
    }
    Ok(WitnessConfig {
        spec,
        a: set("a")?,
        u: set("u")?,
        v: set("v")?,
        placement: get("placement").map(tuple).transpose()?,
        n_max,
        b,
        x,
    })
}
