//! Small 2D vector type used for points, normals and gradients.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Vec2<T> {
    pub const fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Self) -> T {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn norm_squared(self) -> T {
        self.dot(self)
    }

    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    /// Rotation by -90 degrees; for a CCW boundary edge this points outward.
    pub fn perp_cw(self) -> Self {
        Self::new(self.y, -self.x)
    }

    pub fn lerp(self, other: Self, s: T) -> Self {
        self + (other - self) * s
    }

    pub fn cast<U: Scalar>(self) -> Vec2<U> {
        Vec2::new(U::lit(self.x.to_f64_lossy()), U::lit(self.y.to_f64_lossy()))
    }
}

impl<T: Scalar> Add for Vec2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> AddAssign for Vec2<T> {
    fn add_assign(&mut self, rhs: Self) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl<T: Scalar> Sub for Vec2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> SubAssign for Vec2<T> {
    fn sub_assign(&mut self, rhs: Self) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl<T: Scalar> Mul<T> for Vec2<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl<T: Scalar> Div<T> for Vec2<T> {
    type Output = Self;
    fn div(self, s: T) -> Self {
        Self::new(self.x / s, self.y / s)
    }
}

impl<T: Scalar> Neg for Vec2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<T: Scalar> std::iter::Sum for Vec2<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

/// Signed area of a closed polygon (positive when counterclockwise).
pub fn signed_area<T: Scalar>(pts: &[Vec2<T>]) -> T {
    let n = pts.len();
    let mut twice = T::zero();
    for i in 0..n {
        twice += pts[i].cross(pts[(i + 1) % n]);
    }
    twice / T::lit(2.0)
}

/// Center of mass of a simple polygon with nonzero area.
pub fn polygon_centroid<T: Scalar>(pts: &[Vec2<T>]) -> Vec2<T> {
    // shift to the first vertex to limit cancellation on small cells
    let origin = pts[0];
    let n = pts.len();
    let mut twice_area = T::zero();
    let mut acc = Vec2::zero();
    for i in 0..n {
        let a = pts[i] - origin;
        let b = pts[(i + 1) % n] - origin;
        let c = a.cross(b);
        twice_area += c;
        acc += (a + b) * c;
    }
    origin + acc / (T::lit(3.0) * twice_area)
}

/// Largest distance between two vertices of the polygon.
pub fn polygon_diameter<T: Scalar>(pts: &[Vec2<T>]) -> T {
    let mut d = T::zero();
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            d = d.max(p.distance(*q));
        }
    }
    d
}
