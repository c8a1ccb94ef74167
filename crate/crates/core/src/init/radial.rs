use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::geometry::{distance, point_segment_distance};
use crate::mesh::{Centerline, KdTree, NodeMap, VolumeMesh};
use crate::scalar::Real;

/// Distance from each volume node to the centerline segments adjacent to
/// its mapped centerline node.
pub fn centerline_distance<T: Real>(mesh: &VolumeMesh<T>, map: &NodeMap, centerline: &Centerline<T>) -> Result<Vec<T>> {
    check_map(mesh, map, centerline)?;
    Ok(mesh
        .nodes()
        .par_iter()
        .zip(map.index.par_iter())
        .map(|(&x, &i)| {
            let c = centerline.nodes()[i].position;
            let mut d = distance(x, c);
            for j in [centerline.prev(i), centerline.next(i)].into_iter().flatten() {
                d = d.min(point_segment_distance(x, c, centerline.nodes()[j].position));
            }
            d
        })
        .collect())
}

/// Euclidean distance from every node to the nearest wall node.
pub fn wall_distance<T: Real>(mesh: &VolumeMesh<T>) -> Result<Vec<T>> {
    if mesh.wall_faces().is_empty() {
        return Err(Error::MissingWallTags);
    }
    let wall = mesh.wall_nodes();
    let x = mesh.nodes();
    let tree = KdTree::with_ids((0..x.len()).filter(|&p| wall[p]).map(|p| (x[p], p)).collect());
    Ok(x.par_iter().map(|&p| tree.nearest(p).expect("wall nodes exist").1.sqrt()).collect())
}

/// Normalized radial coordinate `d_cl / (d_cl + d_wall)`: 0 on the
/// centerline, 1 on wall nodes.
pub fn radial_coordinate<T: Real>(mesh: &VolumeMesh<T>, map: &NodeMap, centerline: &Centerline<T>) -> Result<Vec<T>> {
    let d_wall = wall_distance(mesh)?;
    let d_cl = centerline_distance(mesh, map, centerline)?;
    Ok(d_cl
        .iter()
        .zip(&d_wall)
        .map(|(&c, &w)| {
            if w == T::zero() {
                T::one()
            } else if c == T::zero() {
                T::zero()
            } else {
                (c / (c + w)).max(T::zero()).min(T::one())
            }
        })
        .collect())
}

/// Radial coordinate `d_cl / sqrt(S / pi)` from the centerline areas, for
/// meshes without wall tags. Clamped to `[0, 1]`.
pub fn radial_coordinate_from_area<T: Real>(
    mesh: &VolumeMesh<T>,
    map: &NodeMap,
    centerline: &Centerline<T>,
) -> Result<Vec<T>> {
    let d_cl = centerline_distance(mesh, map, centerline)?;
    Ok(d_cl.iter().zip(&map.index).map(|(&d, &i)| (d / centerline.radius(i)).min(T::one())).collect())
}

pub(super) fn check_map<T: Real>(mesh: &VolumeMesh<T>, map: &NodeMap, centerline: &Centerline<T>) -> Result<()> {
    if map.len() != mesh.node_count() {
        return Err(Error::LengthMismatch { expected: mesh.node_count(), found: map.len() });
    }
    if let Some(&bad) = map.index.iter().find(|&&i| i >= centerline.len()) {
        return Err(Error::Topology(format!("map references centerline node {bad}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_node_map;
    use crate::mesh::fixtures::straight_tube;

    #[test]
    fn tube_radial_coordinate() {
        let f = straight_tube(1.0f64, 2.0, 20, 10, 11).unwrap();
        let map = build_node_map(&f.centerline, &f.mesh).unwrap();
        let rho = radial_coordinate(&f.mesh, &map, &f.centerline).unwrap();
        let wall = f.mesh.wall_nodes();
        for (p, x) in f.mesh.nodes().iter().enumerate() {
            let r = f64::sqrt(x[0] * x[0] + x[1] * x[1]);
            if wall[p] {
                assert_eq!(rho[p], 1.0);
            } else if r == 0.0 {
                assert_eq!(rho[p], 0.0);
            }
            assert!((0.0..=1.0).contains(&rho[p]));
            // mid-radius nodes away from the distorted grid diagonals
            if (r - 0.5).abs() < 0.03 && (x[0].abs() < 1e-9 || x[1].abs() < 1e-9) {
                assert!((rho[p] - 0.5).abs() < 0.025, "node {p}: {}", rho[p]);
            }
        }
    }

    #[test]
    fn wall_distance_matches_brute_force() {
        let f = straight_tube(1.0f64, 1.0, 16, 4, 5).unwrap();
        let d = wall_distance(&f.mesh).unwrap();
        let wall = f.mesh.wall_nodes();
        let x = f.mesh.nodes();
        let mut worst: f64 = 0.0;
        for p in 0..x.len() {
            let brute = (0..x.len()).filter(|&q| wall[q]).map(|q| distance(x[p], x[q])).fold(f64::INFINITY, f64::min);
            worst = worst.max((d[p] - brute).abs());
        }
        assert!(worst < 1e-12, "{worst}");
    }

    #[test]
    fn area_fallback_matches_on_circles() {
        let f = straight_tube(2.0f64, 2.0, 12, 4, 5).unwrap();
        let map = build_node_map(&f.centerline, &f.mesh).unwrap();
        let rho = radial_coordinate_from_area(&f.mesh, &map, &f.centerline).unwrap();
        for (p, x) in f.mesh.nodes().iter().enumerate() {
            let r = f64::sqrt(x[0] * x[0] + x[1] * x[1]);
            assert!((rho[p] - r / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn untagged_mesh_is_rejected() {
        let nodes = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let mesh = VolumeMesh::new(nodes, vec![[0, 1, 2, 3]], vec![]).unwrap();
        assert!(matches!(wall_distance(&mesh), Err(Error::MissingWallTags)));
    }
}
