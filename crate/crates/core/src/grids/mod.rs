//! Grid families: plain and rooted grids, cylinders, parity handles and
//! vortices, and the even-grid finder.

mod even;
pub mod format;

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::sgraph::{EdgeId, Parity, RootedSignedGraph, Vertex};

pub use even::{find_even_grid_subdivision, find_even_rooted_grid_minor, EvenGrid, EvenGridBranch};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordKind {
    /// (row, column), both 1-based; id = (row − 1)·cols + (column − 1).
    Grid,
    /// (ring, angle), both 0-based; id = ring·cols + angle. The outer ring
    /// is the last one.
    Cylinder,
}

impl CoordKind {
    pub fn keyword(self) -> &'static str {
        match self {
            CoordKind::Grid => "grid",
            CoordKind::Cylinder => "cylinder",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        match s {
            "grid" => Some(CoordKind::Grid),
            "cylinder" => Some(CoordKind::Cylinder),
            _ => None,
        }
    }
}

/// Vertex positions of a generated grid or cylinder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridCoords {
    pub kind: CoordKind,
    pub rows: usize,
    pub cols: usize,
    positions: BTreeMap<Vertex, (usize, usize)>,
    ids: BTreeMap<(usize, usize), Vertex>,
}

impl GridCoords {
    fn formula(kind: CoordKind, rows: usize, cols: usize) -> Self {
        let mut c = GridCoords { kind, rows, cols, positions: BTreeMap::new(), ids: BTreeMap::new() };
        let base = match kind {
            CoordKind::Grid => 1,
            CoordKind::Cylinder => 0,
        };
        for r in 0..rows {
            for a in 0..cols {
                c.insert(r * cols + a, (r + base, a + base));
            }
        }
        c
    }

    /// Coordinates of a `rows × cols` grid.
    pub fn grid(rows: usize, cols: usize) -> Self {
        Self::formula(CoordKind::Grid, rows, cols)
    }

    /// Coordinates of `rings` rings of `len` vertices each.
    pub fn cylinder(rings: usize, len: usize) -> Self {
        Self::formula(CoordKind::Cylinder, rings, len)
    }

    /// Builds coordinates from explicit records; rejects non-bijective input.
    pub fn from_records(
        kind: CoordKind,
        rows: usize,
        cols: usize,
        records: impl IntoIterator<Item = (Vertex, (usize, usize))>,
    ) -> Result<Self> {
        let mut c = GridCoords { kind, rows, cols, positions: BTreeMap::new(), ids: BTreeMap::new() };
        for (v, p) in records {
            if c.positions.contains_key(&v) || c.ids.contains_key(&p) {
                return Err(Error::Grid(format!("coordinate record for vertex {v} at {p:?} repeats")));
            }
            c.insert(v, p);
        }
        Ok(c)
    }

    fn insert(&mut self, v: Vertex, p: (usize, usize)) {
        self.positions.insert(v, p);
        self.ids.insert(p, v);
    }

    pub fn position(&self, v: Vertex) -> Option<(usize, usize)> {
        self.positions.get(&v).copied()
    }

    pub fn id(&self, r: usize, c: usize) -> Option<Vertex> {
        self.ids.get(&(r, c)).copied()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, (usize, usize))> + '_ {
        self.positions.iter().map(|(&v, &p)| (v, p))
    }

    /// The 4-cycles, each listed in cyclic order starting at its top-left
    /// corner. Cylinder cells wrap around.
    pub fn cells(&self) -> Vec<[Vertex; 4]> {
        let mut out = Vec::new();
        match self.kind {
            CoordKind::Grid => {
                for i in 1..self.rows {
                    for j in 1..self.cols {
                        if let (Some(a), Some(b), Some(c), Some(d)) =
                            (self.id(i, j), self.id(i, j + 1), self.id(i + 1, j + 1), self.id(i + 1, j))
                        {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
            CoordKind::Cylinder => {
                if self.cols < 3 {
                    return out;
                }
                for r in 0..self.rows.saturating_sub(1) {
                    for a in 0..self.cols {
                        let b = (a + 1) % self.cols;
                        if let (Some(w), Some(x), Some(y), Some(z)) =
                            (self.id(r, a), self.id(r, b), self.id(r + 1, b), self.id(r + 1, a))
                        {
                            out.push([w, x, y, z]);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Anchor row/column of guest index `x` (1-based) in the k²×k² host.
pub fn anchor(k: usize, x: usize) -> usize {
    (k + 1) * (x - 1) + 1
}

/// Opposite corners (top-left, bottom-right) of the k×k subgrid between
/// anchor rows a, a+1 and anchor columns b−1, b; a ∈ 1..k, b ∈ 2..=k.
pub fn subgrid_corners(k: usize, a: usize, b: usize) -> ((usize, usize), (usize, usize)) {
    ((anchor(k, a) + 1, anchor(k, b - 1) + 1), (anchor(k, a + 1) - 1, anchor(k, b) - 1))
}

/// Some edge joining `u` and `v`.
pub fn edge_between(g: &RootedSignedGraph, u: Vertex, v: Vertex) -> Option<EdgeId> {
    g.incident(u).find(|e| e.other(u) == Some(v)).map(|e| e.id)
}

/// Edges of a closed walk given by its vertices.
pub fn cell_edges(g: &RootedSignedGraph, cell: &[Vertex]) -> Result<Vec<EdgeId>> {
    (0..cell.len())
        .map(|i| {
            let (u, v) = (cell[i], cell[(i + 1) % cell.len()]);
            edge_between(g, u, v).ok_or_else(|| Error::Grid(format!("no edge between {u} and {v}")))
        })
        .collect()
}

fn need_positive(what: &str, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Grid(format!("{what} must be at least 1")));
    }
    Ok(())
}

/// The k×k grid, all edges even, no roots.
pub fn make_grid(k: usize) -> Result<(RootedSignedGraph, GridCoords)> {
    need_positive("grid order", k)?;
    let coords = GridCoords::grid(k, k);
    let mut g = RootedSignedGraph::with_vertices(k * k);
    for i in 1..=k {
        for j in 1..=k {
            let v = coords.id(i, j).unwrap();
            if j < k {
                g.add_edge(v, coords.id(i, j + 1).unwrap(), Parity::Even)?;
            }
            if i < k {
                g.add_edge(v, coords.id(i + 1, j).unwrap(), Parity::Even)?;
            }
        }
    }
    Ok((g, coords))
}

/// The k×k grid, all edges even, rooted at its first row.
pub fn make_rooted_grid(k: usize) -> Result<(RootedSignedGraph, GridCoords)> {
    let (mut g, coords) = make_grid(k)?;
    g.set_roots((1..=k).map(|j| coords.id(1, j).unwrap()))?;
    Ok((g, coords))
}

/// P_n □ C_m with all edges even.
pub fn make_cylindrical_grid(n: usize, m: usize) -> Result<(RootedSignedGraph, GridCoords)> {
    need_positive("ring count", n)?;
    if m < 3 {
        return Err(Error::Grid(format!("ring length must be at least 3, got {m}")));
    }
    let coords = GridCoords::cylinder(n, m);
    let mut g = RootedSignedGraph::with_vertices(n * m);
    for r in 0..n {
        for a in 0..m {
            g.add_edge(coords.id(r, a).unwrap(), coords.id(r, (a + 1) % m).unwrap(), Parity::Even)?;
        }
    }
    for r in 0..n - 1 {
        for a in 0..m {
            g.add_edge(coords.id(r, a).unwrap(), coords.id(r + 1, a).unwrap(), Parity::Even)?;
        }
    }
    Ok((g, coords))
}

/// x_i (1-based) of the order-k parity grids: every other outer vertex.
pub fn outer_vertex(coords: &GridCoords, i: usize) -> Vertex {
    coords.id(coords.rows - 1, 2 * (i - 1)).unwrap()
}

fn parity_grid(k: usize, chords: impl Iterator<Item = (usize, usize)>) -> Result<(RootedSignedGraph, GridCoords)> {
    need_positive("parity grid order", k)?;
    let (g, coords) = make_cylindrical_grid(k, 4 * k)?;
    let mut g = g.with_uniform_parity(Parity::Odd);
    for (i, j) in chords {
        g.add_edge(outer_vertex(&coords, i), outer_vertex(&coords, j), Parity::Odd)?;
    }
    Ok((g, coords))
}

/// Parity handle: the all-odd k × 4k cylinder plus chords x_i x_{2k−i+1}.
pub fn make_parity_handle(k: usize) -> Result<(RootedSignedGraph, GridCoords)> {
    parity_grid(k, (1..=k).map(|i| (i, 2 * k - i + 1)))
}

/// Parity vortex: the all-odd k × 4k cylinder plus chords x_{2i−1} x_{2i}.
pub fn make_parity_vortex(k: usize) -> Result<(RootedSignedGraph, GridCoords)> {
    parity_grid(k, (1..=k).map(|i| (2 * i - 1, 2 * i)))
}

/// Copy of `g` with independent uniformly random edge parities.
pub fn random_signing<R: Rng>(g: &RootedSignedGraph, rng: &mut R) -> RootedSignedGraph {
    g.with_parities(|_| if rng.gen::<bool>() { Parity::Odd } else { Parity::Even })
}
