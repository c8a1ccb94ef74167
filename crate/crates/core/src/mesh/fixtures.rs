//! Synthetic vessel meshes with matching centerlines, used by tests, the
//! acceptance suite and the `fixture` CLI command.
//!
//! Both generators split structured hexahedra into six tetrahedra around the
//! main diagonal, which yields a conforming mesh when every hexahedron uses
//! the same diagonal.

use std::collections::HashMap;

use super::geometry::{cross, dot, sub, Point3};
use super::{Centerline, VolumeMesh};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A volume mesh together with the centerline it was built around.
#[derive(Debug, Clone)]
pub struct Fixture<T> {
    pub mesh: VolumeMesh<T>,
    pub centerline: Centerline<T>,
}

const KUHN: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Six tetrahedra of the unit cube, as corner offsets.
fn kuhn_tets() -> [[[usize; 3]; 4]; 6] {
    let mut out = [[[0; 3]; 4]; 6];
    for (t, perm) in KUHN.iter().enumerate() {
        let mut corner = [0usize; 3];
        out[t][0] = corner;
        for (s, &axis) in perm.iter().enumerate() {
            corner[axis] = 1;
            out[t][s + 1] = corner;
        }
    }
    out
}

fn orient<T: Real>(nodes: &[Point3<T>], mut tet: [usize; 4]) -> [usize; 4] {
    let [a, b, c, d] = tet.map(|v| nodes[v]);
    if dot(cross(sub(b, a), sub(c, a)), sub(d, a)) < T::zero() {
        tet.swap(2, 3);
    }
    tet
}

/// Straight circular tube along +z from `z = 0` to `z = length`.
///
/// The cross-section is an `across x across` square grid mapped onto the
/// disc, so there are `across` elements across the diameter. `layers` is the
/// number of element layers along the axis and `stations` the number of
/// equally spaced centerline nodes.
pub fn straight_tube<T: Real>(
    radius: T,
    length: T,
    across: usize,
    layers: usize,
    stations: usize,
) -> Result<Fixture<T>> {
    if !(radius > T::zero() && length > T::zero()) {
        return Err(Error::param("tube radius and length must be positive"));
    }
    if across < 1 || layers < 1 || stations < 2 {
        return Err(Error::param("tube needs at least one element per direction and two stations"));
    }
    let m = across + 1;
    let id = |i: usize, j: usize, k: usize| (k * m + j) * m + i;
    let half = T::half();
    let mut nodes = Vec::with_capacity(m * m * (layers + 1));
    for k in 0..=layers {
        let z = length * T::of_usize(k) / T::of_usize(layers);
        for j in 0..m {
            for i in 0..m {
                let u = T::two() * T::of_usize(i) / T::of_usize(across) - T::one();
                let v = T::two() * T::of_usize(j) / T::of_usize(across) - T::one();
                let x = u * (T::one() - v * v * half).sqrt();
                let y = v * (T::one() - u * u * half).sqrt();
                nodes.push([radius * x, radius * y, z]);
            }
        }
    }
    let mut cells = Vec::with_capacity(6 * across * across * layers);
    let tets = kuhn_tets();
    for k in 0..layers {
        for j in 0..across {
            for i in 0..across {
                for tet in &tets {
                    let t = tet.map(|c| id(i + c[0], j + c[1], k + c[2]));
                    cells.push(orient(&nodes, t));
                }
            }
        }
    }
    let on_side = |v: usize| {
        let i = v % m;
        let j = (v / m) % m;
        [i == 0, i == across, j == 0, j == across]
    };
    let walls = super::boundary_faces(&cells)
        .into_iter()
        .filter(|f| {
            let s = f.map(on_side);
            (0..4).any(|side| s.iter().all(|flags| flags[side]))
        })
        .collect();
    let mesh = VolumeMesh::new(nodes, cells, walls)?;
    let positions: Vec<Point3<T>> =
        (0..stations).map(|s| [T::zero(), T::zero(), length * T::of_usize(s) / T::of_usize(stations - 1)]).collect();
    let area = T::PI() * radius * radius;
    let centerline = Centerline::from_points(&positions, &vec![area; stations], &vec![0; stations])?;
    Ok(Fixture { mesh, centerline })
}

/// Dimensions of the voxel bifurcation fixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationSpec<T> {
    pub parent_radius: T,
    pub parent_length: T,
    pub child_radius: T,
    pub child_length: T,
    /// Angle of each child to the parent axis, radians.
    pub half_angle: T,
    /// Voxel edge length.
    pub spacing: T,
    /// Centerline node spacing.
    pub station_spacing: T,
}

impl Default for BifurcationSpec<f64> {
    fn default() -> Self {
        Self {
            parent_radius: 1.0,
            parent_length: 4.0,
            child_radius: 0.8,
            child_length: 4.0,
            half_angle: 30f64.to_radians(),
            spacing: 0.1,
            station_spacing: 0.2,
        }
    }
}

/// Symmetric Y-shaped vessel in the xz-plane. The parent runs along +z from
/// `z = 0`; the children leave the junction at `±half_angle` and are cut
/// flat by the plane through their end points.
///
/// The centerline has three branches: parent (0), child towards +x (1) and
/// child towards -x (2). Each child starts at the junction point.
pub fn bifurcation<T: Real>(spec: &BifurcationSpec<T>) -> Result<Fixture<T>> {
    let BifurcationSpec { parent_radius: rp, parent_length: lp, child_radius: rc, child_length: lc, .. } = *spec;
    let h = spec.spacing;
    let positive = [rp, lp, rc, lc, h, spec.station_spacing];
    if positive.iter().any(|v| !(*v > T::zero() && v.is_finite())) {
        return Err(Error::param("bifurcation dimensions must be positive"));
    }
    let (sin, cos) = spec.half_angle.sin_cos();
    if !(sin > T::zero() && cos > T::zero()) {
        return Err(Error::param("bifurcation half angle must lie in (0, pi/2)"));
    }
    let junction = [T::zero(), T::zero(), lp];
    let ends = [[lc * sin, T::zero(), lp + lc * cos], [-lc * sin, T::zero(), lp + lc * cos]];
    let top = lp + lc * cos;
    let segments = [([T::zero(); 3], junction, rp), (junction, ends[0], rc), (junction, ends[1], rc)];
    let inside = |p: Point3<T>| {
        if p[2] < T::zero() || p[2] > top {
            return false;
        }
        if dot(sub(p, junction), sub(p, junction)) < rp * rp {
            return true;
        }
        segments.iter().any(|&(a, b, r)| {
            let ab = sub(b, a);
            let t = dot(sub(p, a), ab) / dot(ab, ab);
            if t < T::zero() || t > T::one() {
                return false;
            }
            let d = sub(p, [a[0] + ab[0] * t, a[1] + ab[1] * t, a[2] + ab[2] * t]);
            dot(d, d) < r * r
        })
    };

    let count = |extent: T| (extent / h).ceil().to_usize().expect("finite extent");
    let half_x = lc * sin + rc / cos + rp;
    let half_y = rp.max(rc);
    let (nx, ny, nz) = (2 * count(half_x), 2 * count(half_y), count(top));
    let x0 = -T::of_usize(nx / 2) * h;
    let y0 = -T::of_usize(ny / 2) * h;
    // the top layer ends exactly at the outlet plane
    let hz = top / T::of_usize(nz);
    let point = |i: usize, j: usize, k: usize| [x0 + T::of_usize(i) * h, y0 + T::of_usize(j) * h, T::of_usize(k) * hz];

    let mut ids: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut lattice = Vec::new();
    let mut nodes = Vec::new();
    let mut cells = Vec::new();
    let tets = kuhn_tets();
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let c = point(i, j, k);
                let center = [c[0] + h * T::half(), c[1] + h * T::half(), c[2] + hz * T::half()];
                if !inside(center) {
                    continue;
                }
                for tet in &tets {
                    let t = tet.map(|o| {
                        let key = (i + o[0], j + o[1], k + o[2]);
                        *ids.entry(key).or_insert_with(|| {
                            nodes.push(point(key.0, key.1, key.2));
                            lattice.push(key.2);
                            nodes.len() - 1
                        })
                    });
                    cells.push(orient(&nodes, t));
                }
            }
        }
    }
    if cells.is_empty() {
        return Err(Error::param("bifurcation spacing too coarse"));
    }
    let walls = super::boundary_faces(&cells)
        .into_iter()
        .filter(|f| !(f.iter().all(|&v| lattice[v] == 0) || f.iter().all(|&v| lattice[v] == nz)))
        .collect();
    let mesh = VolumeMesh::new(nodes, cells, walls)?;

    let mut positions = Vec::new();
    let mut areas = Vec::new();
    let mut branches = Vec::new();
    let polyline = |a: Point3<T>, b: Point3<T>| {
        let n = (super::geometry::distance(a, b) / spec.station_spacing).round().to_usize().unwrap_or(1).max(1);
        (0..=n).map(move |s| super::geometry::lerp(a, b, T::of_usize(s) / T::of_usize(n)))
    };
    for (branch, &(a, b, r)) in segments.iter().enumerate() {
        for p in polyline(a, b) {
            positions.push(p);
            areas.push(T::PI() * r * r);
            branches.push(branch);
        }
    }
    let centerline = Centerline::from_points(&positions, &areas, &branches)?;
    Ok(Fixture { mesh, centerline })
}

/// Two disjoint straight tubes with a centerline through the first only.
/// Mapping it must fail with every node of the second tube unreachable.
pub fn disconnected_tubes<T: Real>(radius: T, length: T, across: usize, layers: usize) -> Result<Fixture<T>> {
    let first = straight_tube(radius, length, across, layers, layers + 1)?;
    let shift = radius * T::lit(3.0);
    let n = first.mesh.node_count();
    let mut nodes = first.mesh.nodes().to_vec();
    nodes.extend(first.mesh.nodes().iter().map(|p| [p[0] + shift, p[1], p[2]]));
    let mut cells = first.mesh.cells().to_vec();
    cells.extend(first.mesh.cells().iter().map(|c| c.map(|v| v + n)));
    let mut walls = first.mesh.wall_faces().to_vec();
    walls.extend(first.mesh.wall_faces().iter().map(|f| f.map(|v| v + n)));
    Ok(Fixture { mesh: VolumeMesh::new(nodes, cells, walls)?, centerline: first.centerline })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn volume(mesh: &VolumeMesh<f64>) -> f64 {
        mesh.cells()
            .iter()
            .map(|c| {
                let [a, b, cc, d] = c.map(|v| mesh.nodes()[v]);
                dot(cross(sub(b, a), sub(cc, a)), sub(d, a)) / 6.0
            })
            .sum()
    }

    #[test]
    fn tube_is_positively_oriented_and_fills_the_cylinder() {
        let f = straight_tube(1.0f64, 2.0, 20, 4, 5).unwrap();
        assert_eq!(f.mesh.node_count(), 21 * 21 * 5);
        assert_eq!(f.mesh.cells().len(), 6 * 400 * 4);
        for c in f.mesh.cells() {
            let [a, b, cc, d] = c.map(|v| f.mesh.nodes()[v]);
            assert!(dot(cross(sub(b, a), sub(cc, a)), sub(d, a)) > 0.0);
        }
        let exact = std::f64::consts::PI * 2.0;
        assert!((volume(&f.mesh) - exact).abs() / exact < 0.02);
    }

    #[test]
    fn tube_wall_is_the_lateral_surface() {
        let f = straight_tube(1.0f64, 2.0, 10, 3, 4).unwrap();
        // boundary = lateral wall + two caps of 2 * across^2 triangles each
        let boundary = f.mesh.boundary_faces().len();
        assert_eq!(f.mesh.wall_faces().len(), boundary - 2 * 2 * 100);
        let wall = f.mesh.wall_nodes();
        for (p, x) in f.mesh.nodes().iter().enumerate() {
            let r = f64::sqrt(x[0] * x[0] + x[1] * x[1]);
            assert_eq!(wall[p], (r - 1.0).abs() < 1e-12, "node {p}");
        }
    }

    #[test]
    fn bifurcation_is_connected_with_three_branches() {
        let f = bifurcation(&BifurcationSpec { spacing: 0.2, ..Default::default() }).unwrap();
        let branches: std::collections::BTreeSet<usize> = f.centerline.nodes().iter().map(|n| n.branch).collect();
        assert_eq!(branches.len(), 3);
        assert!(crate::mesh::build_node_map(&f.centerline, &f.mesh).is_ok());
        assert!(!f.mesh.wall_faces().is_empty());
    }

    #[test]
    fn disconnected_fixture_is_rejected_by_the_map() {
        let f = disconnected_tubes(1.0, 1.0, 4, 2).unwrap();
        let half = f.mesh.node_count() / 2;
        assert!(matches!(
            crate::mesh::build_node_map(&f.centerline, &f.mesh),
            Err(Error::Unreachable { count }) if count == half
        ));
    }
}
