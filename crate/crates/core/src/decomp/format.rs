//! Decomposition text format.
//!
//! ```text
//! kind tree|kfree|tocp|tdm
//! tree <nodes>
//! tedge <a> <b>
//! bag <t> <v>...
//! prot <t> <v>...      # tocp and tdm; missing nodes get α = ∅
//! J <t>...             # tdm only
//! L <v>...             # kfree only
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::types::*;
use crate::error::{Error, Result};
use crate::sgraph::Vertex;
use crate::text::{join, lines};

pub fn parse_decomposition(text: &str) -> Result<Decomposition> {
    let mut kind = None;
    let mut nodes: Option<usize> = None;
    let mut tree_edges = Vec::new();
    let mut bags: Vec<Option<BTreeSet<Vertex>>> = Vec::new();
    let mut prots: Vec<Option<BTreeSet<Vertex>>> = Vec::new();
    let mut strong: Option<BTreeSet<Node>> = None;
    let mut free: Option<BTreeSet<Vertex>> = None;
    for line in lines(text) {
        let node_arg = |nodes: Option<usize>| -> Result<Node> {
            let n = nodes.ok_or_else(|| line.error("`tree` must come before node data"))?;
            let t: Node = line.parse(0, "node")?;
            if t >= n {
                return Err(line.error(format!("node {t} outside 0..{n}")));
            }
            Ok(t)
        };
        match line.keyword {
            "kind" => {
                line.expect_args(1)?;
                let k = Kind::from_keyword(line.args[0])
                    .ok_or_else(|| line.error(format!("unknown kind `{}`", line.args[0])))?;
                if kind.replace(k).is_some() {
                    return Err(line.error("`kind` given twice"));
                }
            }
            "tree" => {
                line.expect_args(1)?;
                if nodes.is_some() {
                    return Err(line.error("`tree` given twice"));
                }
                let n: usize = line.parse(0, "node count")?;
                if n == 0 {
                    return Err(line.error("a decomposition needs at least one node"));
                }
                nodes = Some(n);
                bags = vec![None; n];
                prots = vec![None; n];
            }
            "tedge" => {
                line.expect_args(2)?;
                let a = node_arg(nodes)?;
                let b: Node = line.parse(1, "node")?;
                if b >= bags.len() {
                    return Err(line.error(format!("node {b} outside 0..{}", bags.len())));
                }
                tree_edges.push((a, b));
            }
            "bag" | "prot" => {
                let t = node_arg(nodes)?;
                let set: BTreeSet<Vertex> = line.parse_all(1, "vertex")?.into_iter().collect();
                let slot = if line.keyword == "bag" { &mut bags[t] } else { &mut prots[t] };
                if slot.replace(set).is_some() {
                    return Err(line.error(format!("`{}` for node {t} given twice", line.keyword)));
                }
            }
            "J" => {
                let js: Vec<Node> = line.parse_all(0, "node")?;
                let n = nodes.ok_or_else(|| line.error("`tree` must come before node data"))?;
                if let Some(&t) = js.iter().find(|&&t| t >= n) {
                    return Err(line.error(format!("node {t} outside 0..{n}")));
                }
                if strong.replace(js.into_iter().collect()).is_some() {
                    return Err(line.error("`J` given twice"));
                }
            }
            "L" => {
                let vs: Vec<Vertex> = line.parse_all(0, "vertex")?;
                if free.replace(vs.into_iter().collect()).is_some() {
                    return Err(line.error("`L` given twice"));
                }
            }
            other => return Err(line.error(format!("unknown keyword `{other}`"))),
        }
    }
    let kind = kind.ok_or_else(|| Error::parse(0, "missing `kind` line"))?;
    nodes.ok_or_else(|| Error::parse(0, "missing `tree` line"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(t, b)| b.ok_or_else(|| Error::Decomposition(format!("no bag for node {t}"))))
        .collect::<Result<Vec<_>>>()?;
    let base = TreeDecomposition { tree_edges, bags };
    let has_prot = prots.iter().any(Option::is_some);
    let misplaced = |what: &str| Error::Decomposition(format!("`{what}` not allowed for kind {}", kind.keyword()));
    if has_prot && matches!(kind, Kind::Tree | Kind::KFree) {
        return Err(misplaced("prot"));
    }
    if strong.is_some() && kind != Kind::Tdm {
        return Err(misplaced("J"));
    }
    if free.is_some() && kind != Kind::KFree {
        return Err(misplaced("L"));
    }
    let protectors: Vec<BTreeSet<Vertex>> = prots.into_iter().map(Option::unwrap_or_default).collect();
    Ok(match kind {
        Kind::Tree => Decomposition::Tree(base),
        Kind::KFree => Decomposition::KFree(KFreeDecomposition { base, free: free.unwrap_or_default() }),
        Kind::TameOcp => Decomposition::TameOcp(TameOcpDecomposition { base, protectors }),
        Kind::Tdm => Decomposition::Tdm(TdmDecomposition { base, protectors, strong: strong.unwrap_or_default() }),
    })
}

pub fn write_decomposition(d: &Decomposition) -> String {
    let base = d.base();
    let mut s = format!("kind {}\ntree {}\n", d.kind().keyword(), base.node_count());
    for (a, b) in &base.tree_edges {
        let _ = writeln!(s, "tedge {a} {b}");
    }
    for (t, bag) in base.bags.iter().enumerate() {
        let _ = writeln!(s, "bag {t} {}", join(bag));
        trim_trailing(&mut s);
    }
    let protectors = match d {
        Decomposition::TameOcp(x) => Some(&x.protectors),
        Decomposition::Tdm(x) => Some(&x.protectors),
        _ => None,
    };
    if let Some(ps) = protectors {
        for (t, p) in ps.iter().enumerate() {
            let _ = writeln!(s, "prot {t} {}", join(p));
            trim_trailing(&mut s);
        }
    }
    match d {
        Decomposition::Tdm(x) => {
            let _ = writeln!(s, "J {}", join(&x.strong));
            trim_trailing(&mut s);
        }
        Decomposition::KFree(x) => {
            let _ = writeln!(s, "L {}", join(&x.free));
            trim_trailing(&mut s);
        }
        _ => {}
    }
    s
}

// `join` of an empty set leaves "keyword t \n"; drop the space
fn trim_trailing(s: &mut String) {
    if s.ends_with(" \n") {
        s.truncate(s.len() - 2);
        s.push('\n');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Decomposition {
        TdmDecomposition {
            base: TreeDecomposition {
                tree_edges: vec![(0, 1)],
                bags: vec![[0, 1].into(), [1, 2].into()],
            },
            protectors: vec![[0, 1].into(), BTreeSet::new()],
            strong: [0].into(),
        }
        .into()
    }

    #[test]
    fn round_trip_all_kinds() {
        let tdm = sample();
        let base = tdm.base().clone();
        let kinds: Vec<Decomposition> = vec![
            tdm,
            base.clone().into(),
            KFreeDecomposition { base: base.clone(), free: [2].into() }.into(),
            TameOcpDecomposition { base, protectors: vec![[1].into(), [1].into()] }.into(),
        ];
        for d in kinds {
            let text = write_decomposition(&d);
            assert!(!text.contains(" \n"));
            assert_eq!(parse_decomposition(&text).unwrap(), d, "{text}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_decomposition("tree 1\nbag 0 1\n").is_err());
        assert!(parse_decomposition("kind tree\ntree 1\n").is_err());
        assert!(parse_decomposition("kind tree\ntree 1\nbag 3 1\n").is_err());
        assert!(parse_decomposition("kind tree\ntree 1\nbag 0 1\nJ 0\n").is_err());
        assert!(parse_decomposition("kind kfree\ntree 1\nbag 0 1\nprot 0 1\n").is_err());
        assert!(parse_decomposition("kind tree\nbag 0 1\n").is_err());
    }
}
