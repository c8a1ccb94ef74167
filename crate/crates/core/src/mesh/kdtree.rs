use std::cmp::Ordering;

use super::geometry::{distance_squared, Point3};
use crate::scalar::Real;

/// Static 3-d tree over a point set for nearest-neighbour queries.
///
/// The tree is implicit: the points are permuted so that every range
/// `[lo, hi)` stores its splitting point at `mid = (lo + hi) / 2`, smaller
/// keys on the left. Each point carries an id, and among equidistant
/// candidates the lowest id is returned.
#[derive(Debug, Clone)]
pub struct KdTree<T> {
    points: Vec<Point3<T>>,
    ids: Vec<usize>,
    axes: Vec<u8>,
}

impl<T: Real> KdTree<T> {
    /// Builds a tree over `points`, identified by their position in the
    /// slice.
    pub fn new(points: &[Point3<T>]) -> Self {
        Self::with_ids(points.iter().copied().zip(0..).collect())
    }

    /// Builds a tree over `(point, id)` pairs.
    pub fn with_ids(mut items: Vec<(Point3<T>, usize)>) -> Self {
        let n = items.len();
        let mut axes = vec![0u8; n];
        build(&mut items, &mut axes, 0);
        let (points, ids) = items.into_iter().unzip();
        Self { points, ids, axes }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(id, squared distance)` of the point closest to `query`.
    pub fn nearest(&self, query: Point3<T>) -> Option<(usize, T)> {
        if self.points.is_empty() {
            return None;
        }
        let mut best = (usize::MAX, T::infinity());
        self.search(0, self.points.len(), query, &mut best);
        Some(best)
    }

    fn search(&self, lo: usize, hi: usize, q: Point3<T>, best: &mut (usize, T)) {
        if lo >= hi {
            return;
        }
        let mid = lo + (hi - lo) / 2;
        let p = self.points[mid];
        let d2 = distance_squared(p, q);
        let id = self.ids[mid];
        if d2 < best.1 || (d2 == best.1 && id < best.0) {
            *best = (id, d2);
        }
        let axis = self.axes[mid] as usize;
        let diff = q[axis] - p[axis];
        let (near, far) = if diff < T::zero() { ((lo, mid), (mid + 1, hi)) } else { ((mid + 1, hi), (lo, mid)) };
        self.search(near.0, near.1, q, best);
        // `<=` keeps equidistant points on the far side eligible for the
        // lowest-id tie-break
        if diff * diff <= best.1 {
            self.search(far.0, far.1, q, best);
        }
    }
}

fn key_cmp<T: Real>(a: &(Point3<T>, usize), b: &(Point3<T>, usize), axis: usize) -> Ordering {
    a.0[axis].partial_cmp(&b.0[axis]).unwrap_or(Ordering::Equal).then(a.1.cmp(&b.1))
}

fn build<T: Real>(items: &mut [(Point3<T>, usize)], axes: &mut [u8], depth: usize) {
    let n = items.len();
    if n <= 1 {
        return;
    }
    // split along the axis of largest extent
    let mut axis = depth % 3;
    let mut widest = -T::one();
    for a in 0..3 {
        let (lo, hi) =
            items.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), p| (lo.min(p.0[a]), hi.max(p.0[a])));
        if hi - lo > widest {
            widest = hi - lo;
            axis = a;
        }
    }
    let mid = n / 2;
    items.select_nth_unstable_by(mid, |a, b| key_cmp(a, b, axis));
    axes[mid] = axis as u8;
    let (left, right) = items.split_at_mut(mid);
    let (left_axes, right_axes) = axes.split_at_mut(mid);
    build(left, left_axes, depth + 1);
    build(&mut right[1..], &mut right_axes[1..], depth + 1);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(points: &[Point3<f64>], q: Point3<f64>) -> (usize, f64) {
        points
            .iter()
            .enumerate()
            .map(|(i, &p)| (i, distance_squared(p, q)))
            .fold((usize::MAX, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b })
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let points: Vec<Point3<f64>> = (0..2000).map(|_| [rng.gen(), rng.gen(), rng.gen()]).collect();
        let tree = KdTree::new(&points);
        for _ in 0..500 {
            let q = [rng.gen(), rng.gen(), rng.gen()];
            assert_eq!(tree.nearest(q).unwrap(), brute(&points, q));
        }
    }

    #[test]
    fn ties_resolve_to_lowest_id() {
        // a lattice has many equidistant neighbours
        let mut points = Vec::new();
        for i in 0..6 {
            for j in 0..6 {
                for k in 0..6 {
                    points.push([i as f64, j as f64, k as f64]);
                }
            }
        }
        points.reverse();
        let tree = KdTree::new(&points);
        for q in [[2.5, 2.5, 2.5], [0.5, 0.0, 0.0], [1.5, 3.5, 4.0]] {
            assert_eq!(tree.nearest(q).unwrap(), brute(&points, q));
        }
    }

    #[test]
    fn empty_tree() {
        assert!(KdTree::<f64>::new(&[]).nearest([0.0; 3]).is_none());
    }
}
