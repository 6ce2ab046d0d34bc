//! Small fixed-size vector helpers shared by the surface and conformal
//! modules. Points live in ℝⁿ for n ≤ 4, padded with zeros.

pub type Point = [f64; 4];

pub fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

pub fn norm(a: &Point) -> f64 {
    dot(a, a).sqrt()
}

pub fn add(a: &Point, b: &Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

pub fn scale(c: f64, a: &Point) -> Point {
    [c * a[0], c * a[1], c * a[2], c * a[3]]
}

/// a + c·b
pub fn axpy(a: &Point, c: f64, b: &Point) -> Point {
    [
        a[0] + c * b[0],
        a[1] + c * b[1],
        a[2] + c * b[2],
        a[3] + c * b[3],
    ]
}

/// Cross product of the first three components.
pub fn cross3(a: &Point, b: &Point) -> Point {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
        0.0,
    ]
}

pub fn normalize(a: &Point) -> Point {
    scale(1.0 / norm(a), a)
}
