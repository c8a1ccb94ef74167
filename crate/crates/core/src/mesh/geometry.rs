use crate::scalar::Real;

pub type Point3<T> = [T; 3];

#[inline]
pub fn sub<T: Real>(a: Point3<T>, b: Point3<T>) -> Point3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn add<T: Real>(a: Point3<T>, b: Point3<T>) -> Point3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn scale<T: Real>(a: Point3<T>, s: T) -> Point3<T> {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn dot<T: Real>(a: Point3<T>, b: Point3<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross<T: Real>(a: Point3<T>, b: Point3<T>) -> Point3<T> {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
pub fn norm<T: Real>(a: Point3<T>) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub fn distance_squared<T: Real>(a: Point3<T>, b: Point3<T>) -> T {
    let d = sub(a, b);
    dot(d, d)
}

#[inline]
pub fn distance<T: Real>(a: Point3<T>, b: Point3<T>) -> T {
    distance_squared(a, b).sqrt()
}

/// Linear interpolation `a + t (b - a)`.
#[inline]
pub fn lerp<T: Real>(a: Point3<T>, b: Point3<T>, t: T) -> Point3<T> {
    add(a, scale(sub(b, a), t))
}

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance<T: Real>(p: Point3<T>, a: Point3<T>, b: Point3<T>) -> T {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    if len2 == T::zero() {
        return distance(p, a);
    }
    let t = (dot(sub(p, a), ab) / len2).max(T::zero()).min(T::one());
    distance(p, lerp(a, b, t))
}
