//! Volume initial conditions from a mapped centerline solution: pressure is
//! copied from the mapped centerline node, velocity follows a parabolic
//! profile along the centerline tangent.

mod flux;
mod olufsen;
mod radial;

pub use flux::cross_section_flux;
pub use olufsen::{olufsen_pressure, StiffnessLaw, WallStiffness};
pub use radial::{centerline_distance, radial_coordinate, radial_coordinate_from_area, wall_distance};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mesh::geometry::{scale, Point3};
use crate::mesh::{map_scalar, Centerline, NodeMap, VolumeMesh};
use crate::scalar::Real;

/// Pressure and velocity at every volume node, in mesh node order.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialConditionField<T> {
    pub pressure: Vec<T>,
    pub velocity: Vec<Point3<T>>,
}

/// Centerline pressure copied onto the volume nodes.
pub fn map_pressure<T: Real>(map: &NodeMap, pressure: &[T]) -> Result<Vec<T>> {
    map_scalar(map, pressure, pressure.len())
}

/// `v = 2 (Q / S) (1 - rho^2) t` with `Q`, `S` and `t` taken at the mapped
/// centerline node. The factor 2 makes the section average equal `Q / S` on
/// a circular section.
pub fn reconstruct_velocity<T: Real>(
    map: &NodeMap,
    flow: &[T],
    area: &[T],
    rho: &[T],
    tangents: &[Point3<T>],
) -> Result<Vec<Point3<T>>> {
    let n = flow.len();
    for len in [area.len(), tangents.len()] {
        if len != n {
            return Err(Error::LengthMismatch { expected: n, found: len });
        }
    }
    if rho.len() != map.len() {
        return Err(Error::LengthMismatch { expected: map.len(), found: rho.len() });
    }
    if let Some(i) = area.iter().position(|&s| !(s > T::zero())) {
        return Err(Error::param(format!("centerline node {i}: area {} not positive", area[i])));
    }
    if let Some(&bad) = map.index.iter().find(|&&i| i >= n) {
        return Err(Error::Topology(format!("map references centerline node {bad}")));
    }
    Ok(map
        .index
        .par_iter()
        .zip(rho.par_iter())
        .map(|(&i, &r)| {
            let speed = T::two() * flow[i] / area[i] * (T::one() - r * r);
            scale(tangents[i], speed)
        })
        .collect())
}

/// Full pipeline for one centerline solution. Uses the wall-distance radial
/// coordinate when the mesh has wall tags and the area-based one otherwise.
/// Without a flow the velocity is zero.
pub fn initial_condition<T: Real>(
    mesh: &VolumeMesh<T>,
    centerline: &Centerline<T>,
    map: &NodeMap,
    pressure: &[T],
    flow: Option<&[T]>,
) -> Result<InitialConditionField<T>> {
    if pressure.len() != centerline.len() {
        return Err(Error::LengthMismatch { expected: centerline.len(), found: pressure.len() });
    }
    let pressure_field = map_pressure(map, pressure)?;
    let velocity = match flow {
        Some(q) => {
            let rho = if mesh.wall_faces().is_empty() {
                log::warn!("mesh has no wall tags; using the area-based radial coordinate");
                radial_coordinate_from_area(mesh, map, centerline)?
            } else {
                radial_coordinate(mesh, map, centerline)?
            };
            reconstruct_velocity(map, q, &centerline.areas(), &rho, &centerline.tangents())?
        }
        None => {
            log::warn!("centerline solution carries no flow; velocity set to zero");
            vec![[T::zero(); 3]; mesh.node_count()]
        }
    };
    Ok(InitialConditionField { pressure: pressure_field, velocity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_node_map;
    use crate::mesh::fixtures::straight_tube;
    use crate::mesh::geometry::norm;
    use std::f64::consts::PI;

    #[test]
    fn profile_extremes() {
        let map = NodeMap { index: vec![0, 0], layer: vec![0, 1] };
        let v = reconstruct_velocity(&map, &[1.0], &[PI], &[0.0, 1.0], &[[0.0, 0.0, 1.0]]).unwrap();
        assert!((v[0][2] - 2.0 / PI).abs() < 1e-15);
        assert_eq!(v[1], [0.0; 3]);
        assert!(reconstruct_velocity(&map, &[1.0], &[0.0], &[0.0, 1.0], &[[0.0, 0.0, 1.0]]).is_err());
    }

    #[test]
    fn constant_and_stepwise_pressure() {
        let f = straight_tube(1.0f64, 4.0, 6, 8, 5).unwrap();
        let map = build_node_map(&f.centerline, &f.mesh).unwrap();
        assert!(map_pressure(&map, &[75.0; 5]).unwrap().iter().all(|&p| p == 75.0));
        let linear: Vec<f64> = (0..5).map(|i| 80.0 - i as f64).collect();
        let mapped = map_pressure(&map, &linear).unwrap();
        for (p, x) in f.mesh.nodes().iter().enumerate() {
            assert!(linear.contains(&mapped[p]));
            // nodes take the value of the station nearest their height
            let station = (x[2] + 1e-9).round() as usize;
            if (x[2] - x[2].round()).abs() < 0.25 {
                assert_eq!(mapped[p], linear[station], "node {p}");
            }
        }
    }

    #[test]
    fn tube_initial_condition() {
        let f = straight_tube(1.0f64, 2.0, 20, 8, 9).unwrap();
        let map = build_node_map(&f.centerline, &f.mesh).unwrap();
        let n = f.centerline.len();
        let ic = initial_condition(&f.mesh, &f.centerline, &map, &vec![75.0; n], Some(&vec![1.0; n])).unwrap();
        let wall = f.mesh.wall_nodes();
        let mut peak: f64 = 0.0;
        for p in 0..f.mesh.node_count() {
            if wall[p] {
                assert_eq!(ic.velocity[p], [0.0; 3]);
            }
            assert!(ic.velocity[p][2] >= 0.0);
            peak = peak.max(norm(ic.velocity[p]));
        }
        assert!((peak - 2.0 / PI).abs() < 1e-12);
        for station in 1..n - 1 {
            let q = cross_section_flux(&f.mesh, &ic.velocity, &map, &f.centerline, station).unwrap();
            assert!((q - 1.0).abs() < 0.05, "station {station}: {q}");
        }
        let zero = initial_condition(&f.mesh, &f.centerline, &map, &vec![75.0; n], None).unwrap();
        assert!(zero.velocity.iter().all(|v| *v == [0.0; 3]));
    }
}
