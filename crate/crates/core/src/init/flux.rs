use crate::error::{Error, Result};
use crate::mesh::geometry::{cross, distance, dot, lerp, norm, sub, Point3};
use crate::mesh::{Centerline, NodeMap, VolumeMesh};
use crate::scalar::Real;

use super::radial::check_map;

/// Volume flow through the plane normal to the centerline tangent at
/// `station`.
///
/// Only cells with a node mapped to the station's branch within two local
/// radii of the station take part, so the plane does not pick up flow in
/// neighbouring branches. The velocity is linear on each tetrahedron and
/// is integrated exactly over the triangulated cut.
pub fn cross_section_flux<T: Real>(
    mesh: &VolumeMesh<T>,
    velocity: &[Point3<T>],
    map: &NodeMap,
    centerline: &Centerline<T>,
    station: usize,
) -> Result<T> {
    check_map(mesh, map, centerline)?;
    if velocity.len() != mesh.node_count() {
        return Err(Error::LengthMismatch { expected: mesh.node_count(), found: velocity.len() });
    }
    let node = centerline
        .nodes()
        .get(station)
        .ok_or_else(|| Error::param(format!("station {station} is not a centerline node")))?;
    let origin = node.position;
    let normal = node.tangent;
    let reach = T::two() * centerline.radius(station);
    let x = mesh.nodes();
    let near: Vec<bool> = map
        .index
        .iter()
        .map(|&i| {
            let c = &centerline.nodes()[i];
            c.branch == node.branch && distance(c.position, origin) <= reach
        })
        .collect();
    let side: Vec<T> = x.iter().map(|&p| dot(sub(p, origin), normal)).collect();

    let mut flux = T::zero();
    let mut cut = false;
    for cell in mesh.cells() {
        if !cell.iter().any(|&v| near[v]) {
            continue;
        }
        let (pos, neg): (Vec<usize>, Vec<usize>) = cell.iter().partition(|&&v| side[v] >= T::zero());
        if pos.is_empty() || neg.is_empty() {
            continue;
        }
        cut = true;
        let hit = |a: usize, b: usize| {
            let t = side[a] / (side[a] - side[b]);
            (lerp(x[a], x[b], t), dot(lerp(velocity[a], velocity[b], t), normal))
        };
        let polygon: Vec<(Point3<T>, T)> = match (pos.len(), neg.len()) {
            (1, _) => neg.iter().map(|&b| hit(pos[0], b)).collect(),
            (_, 1) => pos.iter().map(|&a| hit(a, neg[0])).collect(),
            _ => vec![hit(pos[0], neg[0]), hit(pos[0], neg[1]), hit(pos[1], neg[1]), hit(pos[1], neg[0])],
        };
        for k in 1..polygon.len() - 1 {
            let (a, b, c) = (polygon[0], polygon[k], polygon[k + 1]);
            let area = norm(cross(sub(b.0, a.0), sub(c.0, a.0))) * T::half();
            flux += area * (a.1 + b.1 + c.1) / T::lit(3.0);
        }
    }
    if !cut {
        return Err(Error::DegenerateCut { station });
    }
    Ok(flux)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_node_map;
    use crate::mesh::fixtures::straight_tube;

    #[test]
    fn uniform_axial_flow_through_a_tube() {
        let f = straight_tube(1.0f64, 2.0, 16, 8, 9).unwrap();
        let map = build_node_map(&f.centerline, &f.mesh).unwrap();
        let v = vec![[0.0, 0.0, 3.0]; f.mesh.node_count()];
        // the polygonal section is slightly smaller than the disc
        for station in [2, 4, 5] {
            let q = cross_section_flux(&f.mesh, &v, &map, &f.centerline, station).unwrap();
            let exact = 3.0 * std::f64::consts::PI;
            assert!((q - exact).abs() / exact < 0.01, "station {station}: {q}");
        }
    }

    #[test]
    fn zero_field_and_bad_station() {
        let f = straight_tube(1.0f64, 2.0, 6, 4, 5).unwrap();
        let map = build_node_map(&f.centerline, &f.mesh).unwrap();
        let v = vec![[0.0; 3]; f.mesh.node_count()];
        assert_eq!(cross_section_flux(&f.mesh, &v, &map, &f.centerline, 2).unwrap(), 0.0);
        assert!(cross_section_flux(&f.mesh, &v, &map, &f.centerline, 9).is_err());
        assert!(cross_section_flux(&f.mesh, &v[1..], &map, &f.centerline, 2).is_err());
    }

    #[test]
    fn plane_through_a_node_layer_counts_once() {
        // stations coincide with node layers here
        let f = straight_tube(1.0f64, 2.0, 8, 4, 5).unwrap();
        let map = build_node_map(&f.centerline, &f.mesh).unwrap();
        let v = vec![[0.0, 0.0, 1.0]; f.mesh.node_count()];
        let q1 = cross_section_flux(&f.mesh, &v, &map, &f.centerline, 2).unwrap();
        let f2 = straight_tube(1.0f64, 2.0, 8, 4, 4).unwrap();
        let map2 = build_node_map(&f2.centerline, &f2.mesh).unwrap();
        let q2 = cross_section_flux(&f2.mesh, &v, &map2, &f2.centerline, 1).unwrap();
        assert!((q1 - q2).abs() < 1e-12);
    }
}
