use rayon::prelude::*;

use super::{Centerline, KdTree, VolumeMesh};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Seed nodes and their centerline assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seeds {
    /// Volume nodes in the order they were seeded.
    pub nodes: Vec<usize>,
    /// Centerline node per volume node, `None` where not yet assigned.
    pub assignment: Vec<Option<usize>>,
}

/// Map from volume nodes to centerline nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeMap {
    /// Centerline node per volume node.
    pub index: Vec<usize>,
    /// Growth iteration at which each node was assigned; seeds are layer 0.
    pub layer: Vec<u32>,
}

impl NodeMap {
    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    /// Number of growth iterations that added nodes.
    pub fn iterations(&self) -> u32 {
        self.layer.iter().copied().max().unwrap_or(0)
    }
}

/// For each centerline node in order, the closest volume node becomes a seed
/// mapped to it unless an earlier centerline node already claimed it.
pub fn seed_map<T: Real>(centerline: &Centerline<T>, mesh: &VolumeMesh<T>) -> Result<Seeds> {
    if centerline.is_empty() || mesh.node_count() == 0 {
        return Err(Error::Topology("empty centerline or mesh".into()));
    }
    let tree = KdTree::new(mesh.nodes());
    let mut assignment = vec![None; mesh.node_count()];
    let mut nodes = Vec::new();
    for (p, node) in centerline.nodes().iter().enumerate() {
        let (q, _) = tree.nearest(node.position).expect("non-empty tree");
        if assignment[q].is_none() {
            assignment[q] = Some(p);
            nodes.push(q);
        }
    }
    Ok(Seeds { nodes, assignment })
}

/// Grows the seed assignment outward one layer of cells at a time. Each
/// node of a new layer inherits the centerline node of the closest node of
/// the previous layer.
pub fn grow_map<T: Real>(mesh: &VolumeMesh<T>, seeds: &Seeds) -> Result<NodeMap> {
    let n = mesh.node_count();
    if seeds.nodes.is_empty() {
        return Err(Error::Topology("no seed nodes".into()));
    }
    if seeds.assignment.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: seeds.assignment.len() });
    }
    let mut index: Vec<Option<usize>> = seeds.assignment.clone();
    let mut layer = vec![0u32; n];
    let mut point_seen = vec![false; n];
    let mut cell_seen = vec![false; mesh.cells().len()];
    for &s in &seeds.nodes {
        point_seen[s] = true;
    }
    let mut old: Vec<usize>;
    let mut new = seeds.nodes.clone();
    let mut iteration = 0u32;
    while !new.is_empty() {
        old = std::mem::take(&mut new);
        for &p in &old {
            for &c in mesh.point_cells(p) {
                if cell_seen[c] {
                    continue;
                }
                cell_seen[c] = true;
                for &q in &mesh.cells()[c] {
                    if !point_seen[q] {
                        point_seen[q] = true;
                        new.push(q);
                    }
                }
            }
        }
        if new.is_empty() {
            break;
        }
        iteration += 1;
        let tree = KdTree::with_ids(old.iter().map(|&q| (mesh.nodes()[q], q)).collect());
        let inherited: Vec<usize> = new
            .par_iter()
            .map(|&p| {
                let (q, _) = tree.nearest(mesh.nodes()[p]).expect("previous layer is non-empty");
                index[q].expect("previous layer is assigned")
            })
            .collect();
        for (&p, i) in new.iter().zip(inherited) {
            index[p] = Some(i);
            layer[p] = iteration;
        }
    }
    let missing = index.iter().filter(|v| v.is_none()).count();
    if missing > 0 {
        return Err(Error::Unreachable { count: missing });
    }
    Ok(NodeMap { index: index.into_iter().map(|v| v.expect("checked")).collect(), layer })
}

/// Seeds and grows in one call.
pub fn build_node_map<T: Real>(centerline: &Centerline<T>, mesh: &VolumeMesh<T>) -> Result<NodeMap> {
    let seeds = seed_map(centerline, mesh)?;
    grow_map(mesh, &seeds)
}

/// Gathers a centerline field onto the volume nodes.
pub fn map_scalar<V: Copy + Send + Sync>(map: &NodeMap, field: &[V], centerline_len: usize) -> Result<Vec<V>> {
    if field.len() != centerline_len {
        return Err(Error::LengthMismatch { expected: centerline_len, found: field.len() });
    }
    if let Some(&bad) = map.index.iter().find(|&&i| i >= centerline_len) {
        return Err(Error::Topology(format!("map references centerline node {bad}")));
    }
    Ok(map.index.par_iter().map(|&i| field[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::fixtures::straight_tube;

    fn small_tube() -> (Centerline<f64>, VolumeMesh<f64>) {
        let tube = straight_tube(1.0f64, 4.0, 8, 16, 9).unwrap();
        (tube.centerline, tube.mesh)
    }

    #[test]
    fn seeds_sit_on_the_axis() {
        let (cl, mesh) = small_tube();
        let seeds = seed_map(&cl, &mesh).unwrap();
        assert_eq!(seeds.nodes.len(), cl.len());
        for (p, &q) in seeds.nodes.iter().enumerate() {
            let d = crate::mesh::geometry::distance(mesh.nodes()[q], cl.nodes()[p].position);
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn duplicate_nearest_keeps_first() {
        let (_, mesh) = small_tube();
        let pos = [[0.0, 0.0, 0.0], [0.0, 0.0, 1e-3], [0.0, 0.0, 4.0]];
        let cl = Centerline::from_points(&pos, &[1.0; 3], &[0, 0, 0]).unwrap();
        let seeds = seed_map(&cl, &mesh).unwrap();
        assert_eq!(seeds.nodes.len(), 2);
        assert_eq!(seeds.assignment[seeds.nodes[0]], Some(0));
    }

    #[test]
    fn map_is_total_and_layered() {
        let (cl, mesh) = small_tube();
        let map = build_node_map(&cl, &mesh).unwrap();
        assert_eq!(map.len(), mesh.node_count());
        assert!(map.index.iter().all(|&i| i < cl.len()));
        // layer monotonicity: 1 + min layer of earlier-assigned neighbours
        let adj = mesh.node_neighbors();
        for p in 0..mesh.node_count() {
            if map.layer[p] == 0 {
                continue;
            }
            let min = adj[p].iter().map(|&q| map.layer[q]).min().unwrap();
            assert_eq!(map.layer[p], min + 1, "node {p}");
        }
    }

    #[test]
    fn all_seeds_means_no_growth() {
        let nodes = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let mesh = VolumeMesh::new(nodes.clone(), vec![[0, 1, 2, 3]], vec![]).unwrap();
        let cl = Centerline::from_points(&nodes, &[1.0; 4], &[0, 0, 0, 0]).unwrap();
        let map = build_node_map(&cl, &mesh).unwrap();
        assert_eq!(map.iterations(), 0);
        assert_eq!(map.index, vec![0, 1, 2, 3]);
    }

    #[test]
    fn disconnected_piece_is_reported() {
        let mut nodes = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        nodes.extend([[5.0, 0.0, 0.0], [6.0, 0.0, 0.0], [5.0, 1.0, 0.0], [5.0, 0.0, 1.0]]);
        let mesh = VolumeMesh::new(nodes, vec![[0, 1, 2, 3], [4, 5, 6, 7]], vec![]).unwrap();
        let cl = Centerline::from_points(&[[0.0, 0.0, 0.0], [0.0, 0.0, 0.5]], &[1.0; 2], &[0, 0]).unwrap();
        assert!(matches!(build_node_map(&cl, &mesh), Err(Error::Unreachable { count: 4 })));
    }

    #[test]
    fn scalar_gather() {
        let map = NodeMap { index: vec![2, 0, 1, 2], layer: vec![0; 4] };
        assert_eq!(map_scalar(&map, &[7.0; 3], 3).unwrap(), vec![7.0; 4]);
        let ids: Vec<usize> = (0..3).collect();
        assert_eq!(map_scalar(&map, &ids, 3).unwrap(), map.index);
        assert!(map_scalar(&map, &[1.0; 2], 3).is_err());
    }
}
