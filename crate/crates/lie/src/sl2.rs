use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

/// Traceless real 2x2 matrix `[[a, b], [c, -a]]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Sl2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Sl2 {
    pub const ZERO: Sl2 = Sl2 { a: 0.0, b: 0.0, c: 0.0 };
    /// Diagonal generator `diag(1, -1)`.
    pub const E11: Sl2 = Sl2 { a: 1.0, b: 0.0, c: 0.0 };
    pub const E12: Sl2 = Sl2 { a: 0.0, b: 1.0, c: 0.0 };
    pub const E21: Sl2 = Sl2 { a: 0.0, b: 0.0, c: 1.0 };

    pub const fn new(a: f64, b: f64, c: f64) -> Self {
        Sl2 { a, b, c }
    }

    pub fn norm(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    pub fn to_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.a, self.b, self.c, -self.a)
    }

    /// Traceless projection of an arbitrary real matrix.
    pub fn from_matrix(m: &Matrix2<f64>) -> Self {
        Sl2 { a: 0.5 * (m[(0, 0)] - m[(1, 1)]), b: m[(0, 1)], c: m[(1, 0)] }
    }

    pub fn det(&self) -> f64 {
        -self.a * self.a - self.b * self.c
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Sl2 { a: v[0], b: v[1], c: v[2] }
    }
}

impl Add for Sl2 {
    type Output = Sl2;
    fn add(self, o: Sl2) -> Sl2 {
        Sl2 { a: self.a + o.a, b: self.b + o.b, c: self.c + o.c }
    }
}

impl Sub for Sl2 {
    type Output = Sl2;
    fn sub(self, o: Sl2) -> Sl2 {
        Sl2 { a: self.a - o.a, b: self.b - o.b, c: self.c - o.c }
    }
}

impl Neg for Sl2 {
    type Output = Sl2;
    fn neg(self) -> Sl2 {
        Sl2 { a: -self.a, b: -self.b, c: -self.c }
    }
}

impl Mul<f64> for Sl2 {
    type Output = Sl2;
    fn mul(self, s: f64) -> Sl2 {
        Sl2 { a: self.a * s, b: self.b * s, c: self.c * s }
    }
}
