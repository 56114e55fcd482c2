//! Even k×k grids inside signed k²×k² grids.

use std::collections::{BTreeMap, HashMap};

use super::{anchor, make_grid, make_rooted_grid, subgrid_corners, GridCoords};
use crate::error::{Error, Result};
use crate::sgraph::{
    solve_shift, subdivision_to_minor, verify_subdivision_model, EdgeId, MinorModel, Parity, RootedSignedGraph,
    SubdivisionModel, Vertex,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvenGridBranch {
    /// The subgrid between anchor rows a, a+1 and anchor columns b−1, b has
    /// no odd cell and is the model itself.
    Subgrid { a: usize, b: usize },
    /// Anchored construction with paths routed through odd cells.
    Routed,
}

#[derive(Clone, Debug)]
pub struct EvenGrid {
    /// The k×k all-even guest, ids as in [`make_grid`].
    pub guest: RootedSignedGraph,
    pub model: SubdivisionModel,
    pub branch: EvenGridBranch,
}

type Pos = (usize, usize);

struct Host<'a> {
    g: &'a RootedSignedGraph,
    coords: GridCoords,
    edges: HashMap<(Vertex, Vertex), EdgeId>,
}

impl Host<'_> {
    fn check(g: &RootedSignedGraph, n: usize) -> Result<Host<'_>> {
        let bad = |msg: String| Error::Grid(format!("not a {n}×{n} grid: {msg}"));
        if g.vertex_count() != n * n || g.vertices().iter().next_back().is_some_and(|&v| v != n * n - 1) {
            return Err(bad(format!("expected vertices 0..{}", n * n)));
        }
        let coords = GridCoords::grid(n, n);
        let mut edges = HashMap::new();
        for e in g.edges() {
            let (pu, pv) = (coords.position(e.u).unwrap(), coords.position(e.v).unwrap());
            if pu.0.abs_diff(pv.0) + pu.1.abs_diff(pv.1) != 1 {
                return Err(bad(format!("edge {} joins non-adjacent cells", e.id)));
            }
            if edges.insert((e.u.min(e.v), e.u.max(e.v)), e.id).is_some() {
                return Err(bad(format!("edge {} is parallel to another", e.id)));
            }
        }
        if edges.len() != 2 * n * (n - 1) {
            return Err(bad(format!("{} edges instead of {}", edges.len(), 2 * n * (n - 1))));
        }
        Ok(Host { g, coords, edges })
    }

    fn id(&self, p: Pos) -> Vertex {
        self.coords.id(p.0, p.1).unwrap()
    }

    fn edge(&self, p: Pos, q: Pos) -> EdgeId {
        let (u, v) = (self.id(p), self.id(q));
        self.edges[&(u.min(v), u.max(v))]
    }

    fn path(&self, pts: &[Pos]) -> Vec<EdgeId> {
        pts.windows(2).map(|w| self.edge(w[0], w[1])).collect()
    }

    fn parity(&self, path: &[EdgeId]) -> Parity {
        path.iter().map(|id| self.g.edge(*id).unwrap().parity).sum()
    }

    /// Top-left corner of the first odd cell of the box, row-major.
    fn odd_cell(&self, (r0, c0): Pos, (r1, c1): Pos) -> Option<Pos> {
        for r in r0..r1 {
            for c in c0..c1 {
                let cell = [(r, c), (r, c + 1), (r + 1, c + 1), (r + 1, c), (r, c)];
                if self.parity(&self.path(&cell)).is_odd() {
                    return Some((r, c));
                }
            }
        }
        None
    }
}

/// Appends the straight segment from the last point to `to`.
fn line_to(pts: &mut Vec<Pos>, to: Pos) {
    let &(mut r, mut c) = pts.last().unwrap();
    debug_assert!(r == to.0 || c == to.1);
    while (r, c) != to {
        if r != to.0 {
            r = if r < to.0 { r + 1 } else { r - 1 };
        } else {
            c = if c < to.1 { c + 1 } else { c - 1 };
        }
        pts.push((r, c));
    }
}

/// Vertical connection from anchor (top, col) to anchor (bot, col) through
/// the subgrid on its left, passing the odd cell at `cell` either straight
/// down or around its left side.
fn routed(top: usize, bot: usize, col: usize, left: usize, cell: Pos, detour: bool) -> Vec<Pos> {
    let (r0, r1, c1) = (top + 1, bot - 1, col - 1);
    let (cr, cc) = cell;
    let mut pts = vec![(top, col), (r0, col), (r0, c1)];
    line_to(&mut pts, (r0, cc + 1));
    line_to(&mut pts, (cr, cc + 1));
    if detour {
        pts.push((cr, cc));
        pts.push((cr + 1, cc));
    }
    pts.push((cr + 1, cc + 1));
    line_to(&mut pts, (r1, cc + 1));
    line_to(&mut pts, (r1, c1));
    pts.push((r1, col));
    pts.push((bot, col));
    debug_assert!(pts.iter().all(|p| p.1 >= left));
    pts
}

/// Finds (W_k, γ₀) as a subdivision of a signed k²×k² grid whose vertex
/// (i, j) has id (i − 1)k² + (j − 1).
///
/// If one of the k×k subgrids between consecutive anchors has only even
/// cells it is returned as is. Otherwise the anchors (f(a), f(b)) with
/// f(x) = (k + 1)(x − 1) + 1 are joined by straight paths along anchor rows
/// and the first column, and every other vertical guest edge is routed
/// through its subgrid's first odd cell, in the direction that makes the
/// guest cell on its left even.
pub fn find_even_grid_subdivision(host: &RootedSignedGraph, k: usize) -> Result<EvenGrid> {
    if k == 0 {
        return Err(Error::Grid("grid order must be at least 1".into()));
    }
    let n = k * k;
    let h = Host::check(host, n)?;
    let (guest, gc) = make_grid(k)?;
    let gpos = |v: Vertex| gc.position(v).unwrap();

    let mut odd_cells = BTreeMap::new();
    for a in 1..k {
        for b in 2..=k {
            let (lo, hi) = subgrid_corners(k, a, b);
            match h.odd_cell(lo, hi) {
                Some(c) => {
                    odd_cells.insert((a, b), c);
                }
                None => {
                    let vertex_map = guest
                        .vertices()
                        .iter()
                        .map(|&v| {
                            let (p, q) = gpos(v);
                            (v, h.id((lo.0 + p - 1, lo.1 + q - 1)))
                        })
                        .collect();
                    let model = finish(&h, &guest, vertex_map, |e| {
                        let ((p, q), (s, t)) = (gpos(e.0), gpos(e.1));
                        vec![(lo.0 + p - 1, lo.1 + q - 1), (lo.0 + s - 1, lo.1 + t - 1)]
                    })?;
                    return Ok(EvenGrid { guest, model, branch: EvenGridBranch::Subgrid { a, b } });
                }
            }
        }
    }

    let f = |x: usize| anchor(k, x);
    let vertex_map: BTreeMap<Vertex, Vertex> = guest
        .vertices()
        .iter()
        .map(|&v| {
            let (a, b) = gpos(v);
            (v, h.id((f(a), f(b))))
        })
        .collect();
    // vertical guest edge (a, b)–(a + 1, b) for b ≥ 2, decided left to right
    let mut vertical: BTreeMap<(usize, usize), Vec<Pos>> = BTreeMap::new();
    let straight = |p: Pos, q: Pos| {
        let mut pts = vec![p];
        line_to(&mut pts, q);
        pts
    };
    for a in 1..k {
        for b in 2..=k {
            let left = match vertical.get(&(a, b - 1)) {
                Some(pts) => h.parity(&h.path(pts)),
                None => h.parity(&h.path(&straight((f(a), f(1)), (f(a + 1), f(1))))),
            };
            let top = h.parity(&h.path(&straight((f(a), f(b - 1)), (f(a), f(b)))));
            let bottom = h.parity(&h.path(&straight((f(a + 1), f(b - 1)), (f(a + 1), f(b)))));
            let cell = odd_cells[&(a, b)];
            let lo = subgrid_corners(k, a, b).0;
            let plain = routed(f(a), f(a + 1), f(b), lo.1, cell, false);
            let pts = if (left + top + bottom + h.parity(&h.path(&plain))).is_odd() {
                routed(f(a), f(a + 1), f(b), lo.1, cell, true)
            } else {
                plain
            };
            vertical.insert((a, b), pts);
        }
    }
    let model = finish(&h, &guest, vertex_map, |e| {
        let ((a, b), (c, d)) = (gpos(e.0), gpos(e.1));
        let ((a, b), (c, d)) = if (a, b) <= (c, d) { ((a, b), (c, d)) } else { ((c, d), (a, b)) };
        if a == c {
            straight((f(a), f(b)), (f(a), f(d)))
        } else if b == 1 {
            straight((f(a), f(1)), (f(c), f(1)))
        } else {
            vertical[&(a, b)].clone()
        }
    })?;
    Ok(EvenGrid { guest, model, branch: EvenGridBranch::Routed })
}

/// Orients each host path from the image of its guest edge's `u`, solves
/// for the guest shift and checks the result.
fn finish(
    h: &Host<'_>,
    guest: &RootedSignedGraph,
    vertex_map: BTreeMap<Vertex, Vertex>,
    path_of: impl Fn((Vertex, Vertex)) -> Vec<Pos>,
) -> Result<SubdivisionModel> {
    let mut path_map = BTreeMap::new();
    let mut targets = BTreeMap::new();
    for e in guest.edges() {
        let mut pts = path_of((e.u, e.v));
        if h.id(pts[0]) != vertex_map[&e.u] {
            pts.reverse();
        }
        let path = h.path(&pts);
        targets.insert(e.id, h.parity(&path));
        path_map.insert(e.id, path);
    }
    let guest_shift_set = solve_shift(guest, &targets)
        .ok_or_else(|| Error::Grid("image of some guest cell is odd".into()))?;
    let model = SubdivisionModel { vertex_map, path_map, guest_shift_set };
    verify_subdivision_model(h.g, guest, &model).map_err(Error::Model)?;
    Ok(model)
}

/// Finds the rooted grid 𝓦_k as a rooted minor of a signed k²×k² grid
/// rooted at its first row. The even grid found by
/// [`find_even_grid_subdivision`] is joined to the host's first row by
/// straight vertical paths, which join the branch trees of its first row.
pub fn find_even_rooted_grid_minor(host: &RootedSignedGraph, k: usize) -> Result<(RootedSignedGraph, MinorModel)> {
    let found = find_even_grid_subdivision(host, k)?;
    let n = k * k;
    let coords = GridCoords::grid(n, n);
    let first_row: Vec<Vertex> = (1..=n).map(|j| coords.id(1, j).unwrap()).collect();
    if host.roots().len() != n || !first_row.iter().all(|v| host.is_root(*v)) {
        return Err(Error::Grid("roots must be exactly the first row".into()));
    }
    let (guest, gc) = make_rooted_grid(k)?;
    let mut m = subdivision_to_minor(host, &guest, &found.model)?;
    for j in 1..=k {
        let gv = gc.id(1, j).unwrap();
        let (mut r, c) = coords.position(found.model.vertex_map[&gv]).unwrap();
        let tree = m.trees.get_mut(&gv).unwrap();
        while r > 1 {
            let (x, y) = (coords.id(r, c).unwrap(), coords.id(r - 1, c).unwrap());
            let e = super::edge_between(host, x, y).unwrap();
            let mut p = host.edge(e).unwrap().parity;
            if m.shift_set.contains(&x) {
                p = p.flip();
            }
            if p.is_odd() {
                m.shift_set.insert(y);
            }
            tree.vertices.insert(y);
            tree.edges.insert(e);
            r -= 1;
        }
    }
    Ok((guest, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::{cell_edges, make_rooted_grid, random_signing};
    use crate::sgraph::{cycle_parity, verify_minor_model};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn image_cells_even(host: &RootedSignedGraph, eg: &EvenGrid, k: usize) {
        let gc = GridCoords::grid(k, k);
        for cell in gc.cells() {
            let mut cyc = Vec::new();
            for (i, id) in cell_edges(&eg.guest, &cell).unwrap().into_iter().enumerate() {
                let mut path = eg.model.path_map[&id].clone();
                if eg.guest.edge(id).unwrap().u != cell[i] {
                    path.reverse();
                }
                cyc.extend(path);
            }
            assert_eq!(cycle_parity(host, &cyc).unwrap(), Parity::Even);
        }
    }

    #[test]
    fn even_host_uses_subgrid() {
        let (g, _) = make_grid(4).unwrap();
        let eg = find_even_grid_subdivision(&g, 2).unwrap();
        assert_eq!(eg.branch, EvenGridBranch::Subgrid { a: 1, b: 2 });
        image_cells_even(&g, &eg, 2);
    }

    #[test]
    fn all_odd_host_uses_subgrid() {
        // every cell of the all-odd grid has four odd edges
        let (g, _) = make_grid(4).unwrap();
        let g = g.with_uniform_parity(Parity::Odd);
        let eg = find_even_grid_subdivision(&g, 2).unwrap();
        assert_eq!(eg.branch, EvenGridBranch::Subgrid { a: 1, b: 2 });
    }

    #[test]
    fn odd_subgrid_is_routed() {
        let (g, c) = make_grid(4).unwrap();
        let odd = crate::grids::edge_between(&g, c.id(2, 2).unwrap(), c.id(2, 3).unwrap()).unwrap();
        let g = g.with_parities(|e| if e.id == odd { Parity::Odd } else { Parity::Even });
        let eg = find_even_grid_subdivision(&g, 2).unwrap();
        assert_eq!(eg.branch, EvenGridBranch::Routed);
        image_cells_even(&g, &eg, 2);
        // anchors at f(a), f(b)
        let c = GridCoords::grid(4, 4);
        assert_eq!(eg.model.vertex_map[&3], c.id(4, 4).unwrap());
    }

    #[test]
    fn random_signings() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in [1, 2, 3] {
            let (g, _) = make_grid(k * k).unwrap();
            for _ in 0..20 {
                let h = random_signing(&g, &mut rng);
                let eg = find_even_grid_subdivision(&h, k).unwrap();
                image_cells_even(&h, &eg, k);
            }
        }
    }

    #[test]
    fn rooted_minor() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in [1, 2, 3] {
            let (g, _) = make_rooted_grid(k * k).unwrap();
            for signed in [g.clone(), g.with_uniform_parity(Parity::Odd), random_signing(&g, &mut rng)] {
                let (guest, m) = find_even_rooted_grid_minor(&signed, k).unwrap();
                verify_minor_model(&signed, &guest, &m, true).unwrap();
            }
        }
    }

    #[test]
    fn wrong_host_rejected() {
        let (g, _) = make_grid(3).unwrap();
        assert!(find_even_grid_subdivision(&g, 2).is_err());
        let (g, _) = make_grid(4).unwrap();
        assert!(find_even_rooted_grid_minor(&g, 2).is_err());
    }
}
