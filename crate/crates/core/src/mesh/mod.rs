//! Centerlines, tetrahedral volume meshes and the centerline-to-volume
//! node map.

pub mod fixtures;
pub mod geometry;
mod kdtree;
mod map;

pub use kdtree::KdTree;
pub use map::{build_node_map, grow_map, map_scalar, seed_map, NodeMap, Seeds};

use std::collections::HashMap;

use geometry::{distance, norm, scale, sub, Point3};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CenterlineNode<T> {
    pub position: Point3<T>,
    pub tangent: Point3<T>,
    pub area: T,
    pub branch: usize,
}

/// Polyline graph; consecutive nodes (in list order) of the same branch are
/// joined by a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Centerline<T> {
    nodes: Vec<CenterlineNode<T>>,
    prev: Vec<Option<usize>>,
    next: Vec<Option<usize>>,
}

impl<T: Real> Centerline<T> {
    pub fn new(nodes: Vec<CenterlineNode<T>>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Topology("centerline has no nodes".into()));
        }
        let tol = T::lit(1e-6);
        for (i, n) in nodes.iter().enumerate() {
            if !(n.area > T::zero() && n.area.is_finite()) {
                return Err(Error::param(format!("centerline node {i}: area {} not positive", n.area)));
            }
            if n.position.iter().chain(&n.tangent).any(|v| !v.is_finite()) {
                return Err(Error::param(format!("centerline node {i} is not finite")));
            }
            if (norm(n.tangent) - T::one()).abs() > tol {
                return Err(Error::param(format!("centerline node {i}: tangent is not unit length")));
            }
        }
        let (prev, next) = link_branches(&nodes.iter().map(|n| n.branch).collect::<Vec<_>>())?;
        Ok(Self { nodes, prev, next })
    }

    /// Builds a centerline from positions, areas and branch ids, with
    /// tangents from [`tangent_field`].
    pub fn from_points(positions: &[Point3<T>], areas: &[T], branches: &[usize]) -> Result<Self> {
        if areas.len() != positions.len() {
            return Err(Error::LengthMismatch { expected: positions.len(), found: areas.len() });
        }
        if branches.len() != positions.len() {
            return Err(Error::LengthMismatch { expected: positions.len(), found: branches.len() });
        }
        let tangents = tangent_field(positions, branches)?;
        let nodes = positions
            .iter()
            .zip(areas)
            .zip(branches)
            .zip(tangents)
            .map(|(((&position, &area), &branch), tangent)| CenterlineNode { position, tangent, area, branch })
            .collect();
        Self::new(nodes)
    }

    pub fn nodes(&self) -> &[CenterlineNode<T>] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn positions(&self) -> Vec<Point3<T>> {
        self.nodes.iter().map(|n| n.position).collect()
    }

    pub fn areas(&self) -> Vec<T> {
        self.nodes.iter().map(|n| n.area).collect()
    }

    pub fn tangents(&self) -> Vec<Point3<T>> {
        self.nodes.iter().map(|n| n.tangent).collect()
    }

    /// Previous node on the same branch.
    pub fn prev(&self, i: usize) -> Option<usize> {
        self.prev[i]
    }

    /// Next node on the same branch.
    pub fn next(&self, i: usize) -> Option<usize> {
        self.next[i]
    }

    /// Equivalent circular radius `sqrt(S/π)`.
    pub fn radius(&self, i: usize) -> T {
        (self.nodes[i].area / T::PI()).sqrt()
    }
}

fn link_branches(branches: &[usize]) -> Result<(Vec<Option<usize>>, Vec<Option<usize>>)> {
    let n = branches.len();
    let mut prev = vec![None; n];
    let mut next = vec![None; n];
    let mut last: HashMap<usize, usize> = HashMap::new();
    for (i, &b) in branches.iter().enumerate() {
        if let Some(j) = last.insert(b, i) {
            prev[i] = Some(j);
            next[j] = Some(i);
        }
    }
    for (i, &b) in branches.iter().enumerate() {
        if prev[i].is_none() && next[i].is_none() {
            return Err(Error::Topology(format!("branch {b} has a single node")));
        }
    }
    Ok((prev, next))
}

/// Unit tangents by central differences of neighbouring nodes on the same
/// branch, one-sided at branch ends. Tangents point in the direction of
/// increasing node order.
pub fn tangent_field<T: Real>(positions: &[Point3<T>], branches: &[usize]) -> Result<Vec<Point3<T>>> {
    if branches.len() != positions.len() {
        return Err(Error::LengthMismatch { expected: positions.len(), found: branches.len() });
    }
    let (prev, next) = link_branches(branches)?;
    for i in 0..positions.len() {
        if let Some(j) = next[i] {
            if distance(positions[i], positions[j]) == T::zero() {
                return Err(Error::Topology(format!("centerline nodes {i} and {j} coincide")));
            }
        }
    }
    Ok((0..positions.len())
        .map(|i| {
            let a = prev[i].unwrap_or(i);
            let b = next[i].unwrap_or(i);
            let d = sub(positions[b], positions[a]);
            scale(d, T::one() / norm(d))
        })
        .collect())
}

/// Tetrahedral mesh with tagged wall faces.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeMesh<T> {
    nodes: Vec<Point3<T>>,
    cells: Vec<[usize; 4]>,
    wall_faces: Vec<[usize; 3]>,
    cell_offsets: Vec<usize>,
    cell_indices: Vec<usize>,
}

impl<T: Real> VolumeMesh<T> {
    /// Validates ids and that every wall face is a boundary face of exactly
    /// one cell.
    pub fn new(nodes: Vec<Point3<T>>, cells: Vec<[usize; 4]>, wall_faces: Vec<[usize; 3]>) -> Result<Self> {
        let n = nodes.len();
        if n == 0 || cells.is_empty() {
            return Err(Error::Topology("mesh has no nodes or no cells".into()));
        }
        if let Some(i) = nodes.iter().position(|p| p.iter().any(|v| !v.is_finite())) {
            return Err(Error::param(format!("mesh node {i} is not finite")));
        }
        for (c, cell) in cells.iter().enumerate() {
            if cell.iter().any(|&v| v >= n) {
                return Err(Error::Topology(format!("cell {c} references a missing node")));
            }
            let mut s = *cell;
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Topology(format!("cell {c} repeats a node")));
            }
        }
        if !wall_faces.is_empty() {
            let counts = face_counts(&cells);
            for (f, face) in wall_faces.iter().enumerate() {
                if face.iter().any(|&v| v >= n) {
                    return Err(Error::Topology(format!("wall face {f} references a missing node")));
                }
                if counts.get(&sorted_face(*face)).copied() != Some(1) {
                    return Err(Error::Topology(format!("wall face {f} is not a boundary face of one cell")));
                }
            }
        }
        let mut cell_offsets = vec![0usize; n + 1];
        for cell in &cells {
            for &v in cell {
                cell_offsets[v + 1] += 1;
            }
        }
        for i in 0..n {
            cell_offsets[i + 1] += cell_offsets[i];
        }
        let mut fill = cell_offsets.clone();
        let mut cell_indices = vec![0usize; cell_offsets[n]];
        for (c, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_indices[fill[v]] = c;
                fill[v] += 1;
            }
        }
        Ok(Self { nodes, cells, wall_faces, cell_offsets, cell_indices })
    }

    pub fn nodes(&self) -> &[Point3<T>] {
        &self.nodes
    }

    pub fn cells(&self) -> &[[usize; 4]] {
        &self.cells
    }

    pub fn wall_faces(&self) -> &[[usize; 3]] {
        &self.wall_faces
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Cells containing node `p`, in increasing cell order.
    pub fn point_cells(&self, p: usize) -> &[usize] {
        &self.cell_indices[self.cell_offsets[p]..self.cell_offsets[p + 1]]
    }

    pub fn wall_nodes(&self) -> Vec<bool> {
        let mut wall = vec![false; self.nodes.len()];
        for face in &self.wall_faces {
            for &v in face {
                wall[v] = true;
            }
        }
        wall
    }

    /// Node adjacency through cell edges, as sorted neighbour lists.
    pub fn node_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for cell in &self.cells {
            for i in 0..4 {
                for j in 0..4 {
                    if i != j {
                        adj[cell[i]].push(cell[j]);
                    }
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Faces that belong to exactly one cell.
    pub fn boundary_faces(&self) -> Vec<[usize; 3]> {
        boundary_faces(&self.cells)
    }
}

fn sorted_face(mut f: [usize; 3]) -> [usize; 3] {
    f.sort_unstable();
    f
}

const TET_FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];

fn face_counts(cells: &[[usize; 4]]) -> HashMap<[usize; 3], u32> {
    let mut counts = HashMap::with_capacity(cells.len() * 2);
    for cell in cells {
        for f in TET_FACES {
            *counts.entry(sorted_face([cell[f[0]], cell[f[1]], cell[f[2]]])).or_insert(0) += 1;
        }
    }
    counts
}

/// Faces that belong to exactly one cell, in cell order, oriented as they
/// appear in their cell.
pub fn boundary_faces(cells: &[[usize; 4]]) -> Vec<[usize; 3]> {
    let counts = face_counts(cells);
    let mut out = Vec::new();
    for cell in cells {
        for f in TET_FACES {
            let face = [cell[f[0]], cell[f[1]], cell[f[2]]];
            if counts[&sorted_face(face)] == 1 {
                out.push(face);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_line_tangents() {
        let pts: Vec<Point3<f64>> = (0..5).map(|i| [0.0, 0.0, i as f64 * 0.3]).collect();
        let t = tangent_field(&pts, &[0; 5]).unwrap();
        assert!(t.iter().all(|v| *v == [0.0, 0.0, 1.0]));
    }

    #[test]
    fn arc_tangents_are_orthogonal_to_radius() {
        let n = 100;
        let pts: Vec<Point3<f64>> = (0..n)
            .map(|i| {
                let a = std::f64::consts::FRAC_PI_2 * i as f64 / (n - 1) as f64;
                [a.cos(), a.sin(), 0.0]
            })
            .collect();
        let t = tangent_field(&pts, &vec![0; n]).unwrap();
        for (p, v) in pts.iter().zip(&t) {
            assert!(geometry::dot(*p, *v).abs() < 0.01);
        }
    }

    #[test]
    fn endpoint_uses_last_segment() {
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0]];
        let t = tangent_field(&pts, &[0, 0, 0]).unwrap();
        assert_eq!(t[2], [0.0, 1.0, 0.0]);
        assert_eq!(t[0], [1.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_bad_centerlines() {
        let pts = [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0]];
        assert!(tangent_field(&pts, &[0, 0]).is_err());
        let pts = [[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 2.0]];
        assert!(tangent_field(&pts, &[0, 0, 1]).is_err());
        assert!(Centerline::from_points(&pts, &[1.0, 0.0, 1.0], &[0, 0, 0]).is_err());
    }

    #[test]
    fn single_tet_mesh() {
        let nodes = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let mesh = VolumeMesh::new(nodes.clone(), vec![[0, 1, 2, 3]], vec![[0, 1, 2]]).unwrap();
        assert_eq!(mesh.boundary_faces().len(), 4);
        assert_eq!(mesh.point_cells(2), &[0]);
        assert!(VolumeMesh::new(nodes.clone(), vec![[0, 1, 2, 4]], vec![]).is_err());
        assert!(VolumeMesh::new(nodes, vec![[0, 1, 2, 3]], vec![[0, 1, 1]]).is_err());
    }
}
