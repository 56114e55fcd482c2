//! Text formats for graphs, models and path maps.
//!
//! Graph:
//! ```text
//! graph <n>
//! vertices <id...>          # optional, defaults to 0..n-1
//! edge <id> <u> <v> <0|1>
//! roots <id...>
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::graph::{Edge, Parity, RootedSignedGraph, Vertex};
use super::models::{BranchTree, MinorModel, SubdivisionModel};
use super::transform::{PathMap, SubdividedEdge};
use crate::error::{Error, Result};
use crate::text::{join, lines};

fn header<'a>(it: &mut impl Iterator<Item = crate::text::Line<'a>>, word: &str) -> Result<crate::text::Line<'a>> {
    let line = it.next().ok_or_else(|| Error::parse(0, format!("empty input, expected `{word}`")))?;
    if line.keyword != word {
        return Err(line.error(format!("expected `{word}` header, found `{}`", line.keyword)));
    }
    Ok(line)
}

pub fn parse_graph(text: &str) -> Result<RootedSignedGraph> {
    let mut it = lines(text);
    let head = header(&mut it, "graph")?;
    head.expect_args(1)?;
    let n: usize = head.parse(0, "vertex count")?;
    let mut vertices: Option<Vec<Vertex>> = None;
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    let mut seen_ids = BTreeSet::new();
    for line in it {
        match line.keyword {
            "vertices" => {
                let vs: Vec<Vertex> = line.parse_all(0, "vertex")?;
                let uniq: BTreeSet<Vertex> = vs.iter().copied().collect();
                if vs.len() != n || uniq.len() != n {
                    return Err(line.error(format!("expected {n} distinct vertex ids")));
                }
                vertices = Some(vs);
            }
            "edge" => {
                line.expect_args(4)?;
                let id = line.parse(0, "edge id")?;
                let u = line.parse(1, "endpoint")?;
                let v = line.parse(2, "endpoint")?;
                let bit: u8 = line.parse(3, "parity")?;
                let p = Parity::from_bit(bit).ok_or_else(|| line.error("parity must be 0 or 1"))?;
                if u == v {
                    return Err(line.error(format!("edge {id} is a loop")));
                }
                if !seen_ids.insert(id) {
                    return Err(line.error(format!("duplicate edge id {id}")));
                }
                edges.push((line.number, Edge::new(id, u, v, p)));
            }
            "roots" => roots.extend(line.parse_all::<Vertex>(0, "root")?),
            other => return Err(line.error(format!("unknown keyword `{other}`"))),
        }
    }
    let vertices = vertices.unwrap_or_else(|| (0..n).collect());
    let mut g = RootedSignedGraph::new(vertices, [], [])?;
    for (num, e) in edges {
        g.insert_edge(e).map_err(|err| Error::parse(num, err.to_string()))?;
    }
    g.set_roots(roots)?;
    Ok(g)
}

pub fn write_graph(g: &RootedSignedGraph) -> String {
    let n = g.vertex_count();
    let mut s = format!("graph {n}\n");
    if !g.vertices().iter().copied().eq(0..n) {
        let _ = writeln!(s, "vertices {}", join(g.vertices()));
    }
    for e in g.edges() {
        let _ = writeln!(s, "edge {} {} {} {}", e.id, e.u, e.v, e.parity);
    }
    if !g.roots().is_empty() {
        let _ = writeln!(s, "roots {}", join(g.roots()));
    }
    s
}

/// ```text
/// subdivision
/// vmap <guest> <host>
/// path <guest_edge> <host_edge...>
/// shift <guest vertex...>
/// ```
pub fn parse_subdivision_model(text: &str) -> Result<SubdivisionModel> {
    let mut it = lines(text);
    header(&mut it, "subdivision")?;
    let mut m = SubdivisionModel::default();
    for line in it {
        match line.keyword {
            "vmap" => {
                line.expect_args(2)?;
                m.vertex_map.insert(line.parse(0, "guest vertex")?, line.parse(1, "host vertex")?);
            }
            "path" => {
                let ge = line.parse(0, "guest edge")?;
                m.path_map.insert(ge, line.parse_all(1, "host edge")?);
            }
            "shift" => m.guest_shift_set.extend(line.parse_all::<Vertex>(0, "vertex")?),
            other => return Err(line.error(format!("unknown keyword `{other}`"))),
        }
    }
    Ok(m)
}

pub fn write_subdivision_model(m: &SubdivisionModel) -> String {
    let mut s = String::from("subdivision\n");
    for (g, h) in &m.vertex_map {
        let _ = writeln!(s, "vmap {g} {h}");
    }
    for (e, p) in &m.path_map {
        let _ = writeln!(s, "path {e} {}", join(p));
    }
    if !m.guest_shift_set.is_empty() {
        let _ = writeln!(s, "shift {}", join(&m.guest_shift_set));
    }
    s
}

/// ```text
/// minor
/// tv <guest> <host vertex...>     # branch tree vertices
/// te <guest> <host edge...>       # branch tree edges
/// emap <guest_edge> <host_edge>
/// shift <host vertex...>
/// ```
pub fn parse_minor_model(text: &str) -> Result<MinorModel> {
    let mut it = lines(text);
    header(&mut it, "minor")?;
    let mut m = MinorModel::default();
    for line in it {
        match line.keyword {
            "tv" => {
                let gv = line.parse(0, "guest vertex")?;
                let t = m.trees.entry(gv).or_default();
                t.vertices.extend(line.parse_all::<Vertex>(1, "host vertex")?);
            }
            "te" => {
                let gv = line.parse(0, "guest vertex")?;
                let t = m.trees.entry(gv).or_default();
                t.edges.extend(line.parse_all::<usize>(1, "host edge")?);
            }
            "emap" => {
                line.expect_args(2)?;
                m.edge_map.insert(line.parse(0, "guest edge")?, line.parse(1, "host edge")?);
            }
            "shift" => m.shift_set.extend(line.parse_all::<Vertex>(0, "vertex")?),
            other => return Err(line.error(format!("unknown keyword `{other}`"))),
        }
    }
    Ok(m)
}

pub fn write_minor_model(m: &MinorModel) -> String {
    let mut s = String::from("minor\n");
    for (g, BranchTree { vertices, edges }) in &m.trees {
        let _ = writeln!(s, "tv {g} {}", join(vertices));
        if !edges.is_empty() {
            let _ = writeln!(s, "te {g} {}", join(edges));
        }
    }
    for (g, h) in &m.edge_map {
        let _ = writeln!(s, "emap {g} {h}");
    }
    if !m.shift_set.is_empty() {
        let _ = writeln!(s, "shift {}", join(&m.shift_set));
    }
    s
}

/// ```text
/// pathmap
/// sub <orig_edge> <u> <v> <parity> interior <x...> edges <e...>
/// ```
pub fn parse_path_map(text: &str) -> Result<PathMap> {
    let mut it = lines(text);
    header(&mut it, "pathmap")?;
    let mut map = BTreeMap::new();
    for line in it {
        if line.keyword != "sub" {
            return Err(line.error(format!("unknown keyword `{}`", line.keyword)));
        }
        let id = line.parse(0, "edge id")?;
        let u = line.parse(1, "endpoint")?;
        let v = line.parse(2, "endpoint")?;
        let bit: u8 = line.parse(3, "parity")?;
        let parity = Parity::from_bit(bit).ok_or_else(|| line.error("parity must be 0 or 1"))?;
        if line.args.get(4) != Some(&"interior") {
            return Err(line.error("expected `interior`"));
        }
        let split = line
            .args
            .iter()
            .position(|t| *t == "edges")
            .ok_or_else(|| line.error("expected `edges`"))?;
        let interior = (5..split).map(|i| line.parse(i, "vertex")).collect::<Result<Vec<_>>>()?;
        let edges = line.parse_all(split + 1, "edge")?;
        map.insert(id, SubdividedEdge { u, v, parity, interior, edges });
    }
    Ok(map)
}

pub fn write_path_map(map: &PathMap) -> String {
    let mut s = String::from("pathmap\n");
    for (id, p) in map {
        let _ = writeln!(
            s,
            "sub {id} {} {} {} interior {} edges {}",
            p.u,
            p.v,
            p.parity,
            join(&p.interior),
            join(&p.edges)
        );
    }
    s
}
