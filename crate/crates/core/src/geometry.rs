//! Points, rectangles, cell grids and polylines in the z-plane.

use serde::{Deserialize, Serialize};

use crate::bicomplex::Bicomplex;
use crate::error::{Error, Result};

/// A point `z = x + y k` of the z-plane.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn to_bicomplex(self) -> Bicomplex {
        Bicomplex::from_real(self.x, self.y)
    }

    pub fn abs(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).abs()
    }

    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        Point2::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl std::ops::Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

/// A point `(x1, x2, x3)` of physical space.
pub type Point3 = [f64; 3];

/// Axis-aligned rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Rect {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Rect {
    pub const fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    /// The square `[-r, r]²`.
    pub const fn square(r: f64) -> Self {
        Self::new(-r, r, -r, r)
    }

    pub fn contains(&self, z: Point2) -> bool {
        (self.x_min..=self.x_max).contains(&z.x) && (self.y_min..=self.y_max).contains(&z.y)
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    /// Tensor grid of `nx × ny` points including the corners, row-major in `y`.
    pub fn grid(&self, nx: usize, ny: usize) -> Vec<Point2> {
        let step = |lo: f64, hi: f64, n: usize, i: usize| {
            if n <= 1 {
                0.5 * (lo + hi)
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                out.push(Point2::new(
                    step(self.x_min, self.x_max, nx, i),
                    step(self.y_min, self.y_max, ny, j),
                ));
            }
        }
        out
    }

    /// Shrinks the rectangle by `margin` on every side.
    pub fn shrink(&self, margin: f64) -> Rect {
        Rect::new(
            self.x_min + margin,
            self.x_max - margin,
            self.y_min + margin,
            self.y_max - margin,
        )
    }
}

/// Uniform partition of a rectangle into `nx × ny` cells, addressed by cell centres.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellGrid {
    pub rect: Rect,
    pub nx: usize,
    pub ny: usize,
}

impl CellGrid {
    pub fn new(rect: Rect, nx: usize, ny: usize) -> Self {
        Self { rect, nx, ny }
    }

    pub fn dx(&self) -> f64 {
        self.rect.width() / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.rect.height() / self.ny as f64
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    pub fn diagonal(&self) -> f64 {
        self.dx().hypot(self.dy())
    }

    pub fn center(&self, i: usize, j: usize) -> Point2 {
        Point2::new(
            self.rect.x_min + (i as f64 + 0.5) * self.dx(),
            self.rect.y_min + (j as f64 + 0.5) * self.dy(),
        )
    }

    /// All cell centres, `i` fastest.
    pub fn centers(&self) -> Vec<Point2> {
        (0..self.ny)
            .flat_map(|j| (0..self.nx).map(move |i| (i, j)))
            .map(|(i, j)| self.center(i, j))
            .collect()
    }
}

/// Piecewise-linear path through at least two distinct consecutive vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct Polyline {
    vertices: Vec<Point2>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::Invalid(
                "polyline needs at least two vertices".into(),
            ));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid(
                "polyline has repeated consecutive vertices".into(),
            ));
        }
        if vertices
            .iter()
            .any(|v| !v.x.is_finite() || !v.y.is_finite())
        {
            return Err(Error::Invalid("polyline vertex is not finite".into()));
        }
        Ok(Self { vertices })
    }

    pub fn segment(a: Point2, b: Point2) -> Result<Self> {
        Self::new(vec![a, b])
    }

    /// Two-leg path `a → (b.x, a.y) → b`, falling back to the other corner
    /// when the first one coincides with an endpoint.
    pub fn dog_leg(a: Point2, b: Point2) -> Result<Self> {
        let corner = Point2::new(b.x, a.y);
        if corner != a && corner != b {
            return Self::new(vec![a, corner, b]);
        }
        let corner = Point2::new(a.x, b.y);
        if corner != a && corner != b {
            return Self::new(vec![a, corner, b]);
        }
        Self::segment(a, b)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn start(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn end(&self) -> Point2 {
        *self.vertices.last().expect("polyline is never empty")
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(b)).sum()
    }
}

impl TryFrom<Vec<Point2>> for Polyline {
    type Error = Error;
    fn try_from(v: Vec<Point2>) -> Result<Self> {
        Polyline::new(v)
    }
}

impl From<Polyline> for Vec<Point2> {
    fn from(p: Polyline) -> Self {
        p.vertices
    }
}
