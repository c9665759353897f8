//! Boundary curves of the cross-section, their node grids, and region
//! classification.
//!
//! All curves are 2π-periodic and parametrized counterclockwise, so the
//! normal `(x₂′, −x₁′)/|x′|` points out of the region the curve encloses. On
//! the outer curve `Γ₀` this is into the exterior `Ω₀`; on the inner curve
//! `Γ₁` it is out of the hole and into the annulus `Ω₁`. The tangent is
//! `τ = (−n₂, n₁) = x′/|x′|`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Point) -> f64 {
        (self - o).norm()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// Position and first two derivatives of a parametrization at one `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub position: Point,
    pub velocity: Point,
    pub acceleration: Point,
}

/// Radial function `r(t)` with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RadialFunction {
    Constant(f64),
    /// `r(t) = (p cos²t + q sin²t)^{1/2}`
    Peanut { p: f64, q: f64 },
    /// `r(t) = (a + b cos t + c sin 2t) / (1 + d cos t)`
    Apple { a: f64, b: f64, c: f64, d: f64 },
}

impl RadialFunction {
    /// Returns `(r, r′, r″)`.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        match *self {
            RadialFunction::Constant(r) => (r, 0.0, 0.0),
            RadialFunction::Peanut { p, q } => {
                // g = p cos² + q sin² = (p + q)/2 + (p - q)/2 cos 2t
                let (s2, c2) = (2.0 * t).sin_cos();
                let half = 0.5 * (p - q);
                let g = 0.5 * (p + q) + half * c2;
                let g1 = -2.0 * half * s2;
                let g2 = -4.0 * half * c2;
                let r = g.sqrt();
                let r1 = g1 / (2.0 * r);
                let r2 = g2 / (2.0 * r) - g1 * g1 / (4.0 * r * g);
                (r, r1, r2)
            }
            RadialFunction::Apple { a, b, c, d } => {
                let (s, co) = t.sin_cos();
                let (s2, c2) = (2.0 * t).sin_cos();
                let num = a + b * co + c * s2;
                let num1 = -b * s + 2.0 * c * c2;
                let num2 = -b * co - 4.0 * c * s2;
                let den = 1.0 + d * co;
                let den1 = -d * s;
                let den2 = -d * co;
                let r = num / den;
                let r1 = (num1 - r * den1) / den;
                let r2 = (num2 - 2.0 * r1 * den1 - r * den2) / den;
                (r, r1, r2)
            }
        }
    }
}

/// User-supplied parametrization returning `[x, x′, x″]` at `t`.
pub type JetFn = Arc<dyn Fn(f64) -> [Point; 3] + Send + Sync>;

#[derive(Clone)]
pub enum CurveShape {
    Circle {
        center: Point,
        radius: f64,
    },
    /// `x(t) = (a cos t + b cos 2t, c sin t) + center`
    Kite {
        a: f64,
        b: f64,
        c: f64,
        center: Point,
    },
    /// `x(t) = r(t) (cos t, sin t) + offset`
    Radial {
        radius: RadialFunction,
        offset: Point,
    },
    Generic(JetFn),
}

impl fmt::Debug for CurveShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveShape::Circle { center, radius } => f
                .debug_struct("Circle")
                .field("center", center)
                .field("radius", radius)
                .finish(),
            CurveShape::Kite { a, b, c, center } => f
                .debug_struct("Kite")
                .field("a", a)
                .field("b", b)
                .field("c", c)
                .field("center", center)
                .finish(),
            CurveShape::Radial { radius, offset } => f
                .debug_struct("Radial")
                .field("radius", radius)
                .field("offset", offset)
                .finish(),
            CurveShape::Generic(_) => f.write_str("Generic(..)"),
        }
    }
}

/// Samples used for validation, classification and distance queries.
const POLYGON_SAMPLES: usize = 2048;

/// A smooth, closed, counterclockwise boundary curve.
#[derive(Clone)]
pub struct Curve {
    shape: CurveShape,
    polygon: Arc<Vec<Point>>,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Curve").field(&self.shape).finish()
    }
}

impl Curve {
    pub fn new(shape: CurveShape) -> Result<Self> {
        match &shape {
            CurveShape::Circle { radius, .. } if !(*radius > 0.0 && radius.is_finite()) => {
                return Err(Error::Geometry(format!("circle radius must be positive, got {radius}")));
            }
            CurveShape::Radial { radius, .. } => {
                for k in 0..POLYGON_SAMPLES {
                    let t = TAU * k as f64 / POLYGON_SAMPLES as f64;
                    let r = radius.eval(t).0;
                    if !(r > 0.0 && r.is_finite()) {
                        return Err(Error::Geometry(format!(
                            "radial function must be positive, r({t:.6}) = {r}"
                        )));
                    }
                }
            }
            _ => {}
        }
        let mut curve = Curve {
            shape,
            polygon: Arc::new(Vec::new()),
        };
        let polygon: Vec<Point> = (0..POLYGON_SAMPLES)
            .map(|k| curve.jet(TAU * k as f64 / POLYGON_SAMPLES as f64).position)
            .collect();
        curve.polygon = Arc::new(polygon);
        curve.validate()?;
        Ok(curve)
    }

    pub fn circle(center: Point, radius: f64) -> Result<Self> {
        Self::new(CurveShape::Circle { center, radius })
    }

    /// The kite `(0.2 cos t + 0.1 cos 2t − 0.2, 0.2 sin t + 0.1)`.
    pub fn kite() -> Self {
        Self::new(CurveShape::Kite {
            a: 0.2,
            b: 0.1,
            c: 0.2,
            center: Point::new(-0.2, 0.1),
        })
        .expect("built-in kite is valid")
    }

    pub fn radial(radius: RadialFunction, offset: Point) -> Result<Self> {
        Self::new(CurveShape::Radial { radius, offset })
    }

    /// `r(t) = (0.5 cos²t + 0.1 sin²t)^{1/2}` centred at the origin.
    pub fn peanut() -> Self {
        Self::radial(RadialFunction::Peanut { p: 0.5, q: 0.1 }, Point::default())
            .expect("built-in peanut is valid")
    }

    /// `r(t) = (0.45 + 0.3 cos t − 0.1 sin 2t)/(1 + 0.7 cos t)` shifted by `offset`.
    pub fn apple(offset: Point) -> Self {
        Self::radial(
            RadialFunction::Apple {
                a: 0.45,
                b: 0.3,
                c: -0.1,
                d: 0.7,
            },
            offset,
        )
        .expect("built-in apple is valid")
    }

    pub fn shape(&self) -> &CurveShape {
        &self.shape
    }

    fn validate(&self) -> Result<()> {
        let pts = &self.polygon;
        let m = pts.len();
        for k in 0..m {
            let t = TAU * k as f64 / m as f64;
            let j = self.jet(t);
            let speed = j.velocity.norm();
            if !(speed > 0.0) || !speed.is_finite() || !j.acceleration.norm().is_finite() {
                return Err(Error::Geometry(format!("degenerate parametrization at t = {t:.6}")));
            }
        }
        if signed_area(pts) <= 0.0 {
            return Err(Error::Geometry("curve must be counterclockwise".into()));
        }
        // Non-adjacent polygon edges must not cross.
        let step = 8;
        let coarse: Vec<Point> = pts.iter().step_by(step).copied().collect();
        let c = coarse.len();
        for i in 0..c {
            let (a0, a1) = (coarse[i], coarse[(i + 1) % c]);
            for j in i + 2..c {
                if i == 0 && j == c - 1 {
                    continue;
                }
                let (b0, b1) = (coarse[j], coarse[(j + 1) % c]);
                if segments_cross(a0, a1, b0, b1) {
                    return Err(Error::Geometry("curve is self-intersecting".into()));
                }
            }
        }
        Ok(())
    }

    /// Position, first and second derivative at `t`.
    pub fn jet(&self, t: f64) -> Jet {
        match &self.shape {
            CurveShape::Circle { center, radius } => {
                let (s, c) = t.sin_cos();
                Jet {
                    position: Point::new(center.x + radius * c, center.y + radius * s),
                    velocity: Point::new(-radius * s, radius * c),
                    acceleration: Point::new(-radius * c, -radius * s),
                }
            }
            CurveShape::Kite { a, b, c, center } => {
                let (s1, c1) = t.sin_cos();
                let (s2, c2) = (2.0 * t).sin_cos();
                Jet {
                    position: Point::new(a * c1 + b * c2 + center.x, c * s1 + center.y),
                    velocity: Point::new(-a * s1 - 2.0 * b * s2, c * c1),
                    acceleration: Point::new(-a * c1 - 4.0 * b * c2, -c * s1),
                }
            }
            CurveShape::Radial { radius, offset } => {
                let (r, r1, r2) = radius.eval(t);
                let (s, c) = t.sin_cos();
                let e = Point::new(c, s);
                let e_perp = Point::new(-s, c);
                Jet {
                    position: e * r + *offset,
                    velocity: e * r1 + e_perp * r,
                    acceleration: e * (r2 - r) + e_perp * (2.0 * r1),
                }
            }
            CurveShape::Generic(f) => {
                let [p, v, a] = f(t);
                Jet {
                    position: p,
                    velocity: v,
                    acceleration: a,
                }
            }
        }
    }

    /// Position, speed, unit normal, unit tangent and second derivative at `t`.
    pub fn frame(&self, t: f64) -> Frame {
        let j = self.jet(t);
        let speed = j.velocity.norm();
        let normal = Point::new(j.velocity.y / speed, -j.velocity.x / speed);
        Frame {
            position: j.position,
            speed,
            normal,
            tangent: Point::new(-normal.y, normal.x),
            acceleration: j.acceleration,
        }
    }

    /// Dense polygon approximation (2048 vertices).
    pub fn polygon(&self) -> &[Point] {
        &self.polygon
    }

    /// Winding number of the curve around `p`.
    pub fn winding_number(&self, p: Point) -> i32 {
        winding_number(&self.polygon, p)
    }

    /// Distance from `p` to the curve, measured against the dense polygon.
    pub fn distance(&self, p: Point) -> f64 {
        polyline_distance(&self.polygon, p)
    }

    pub fn max_speed(&self) -> f64 {
        (0..POLYGON_SAMPLES)
            .map(|k| self.jet(TAU * k as f64 / POLYGON_SAMPLES as f64).velocity.norm())
            .fold(0.0, f64::max)
    }

    /// Default near-boundary clearance for a grid with half node count `n`.
    pub fn default_clearance(&self, n: usize) -> f64 {
        TAU * self.max_speed() / n as f64
    }
}

/// Geometry at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub position: Point,
    pub speed: f64,
    pub normal: Point,
    pub tangent: Point,
    pub acceleration: Point,
}

/// A curve sampled at `t_k = kπ/n`, `k = 0..2n`.
#[derive(Debug, Clone)]
pub struct BoundaryGrid {
    curve: Curve,
    n: usize,
    pub t: Vec<f64>,
    pub position: Vec<Point>,
    pub velocity: Vec<Point>,
    pub acceleration: Vec<Point>,
    pub speed: Vec<f64>,
    pub normal: Vec<Point>,
    pub tangent: Vec<Point>,
}

impl BoundaryGrid {
    pub fn new(curve: &Curve, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Argument(format!("half node count must be >= 2, got {n}")));
        }
        let len = 2 * n;
        let mut g = BoundaryGrid {
            curve: curve.clone(),
            n,
            t: Vec::with_capacity(len),
            position: Vec::with_capacity(len),
            velocity: Vec::with_capacity(len),
            acceleration: Vec::with_capacity(len),
            speed: Vec::with_capacity(len),
            normal: Vec::with_capacity(len),
            tangent: Vec::with_capacity(len),
        };
        for k in 0..len {
            let t = k as f64 * PI / n as f64;
            let j = curve.jet(t);
            let f = curve.frame(t);
            g.t.push(t);
            g.position.push(j.position);
            g.velocity.push(j.velocity);
            g.acceleration.push(j.acceleration);
            g.speed.push(f.speed);
            g.normal.push(f.normal);
            g.tangent.push(f.tangent);
        }
        Ok(g)
    }

    /// Half node count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nodes, `2n`.
    pub fn len(&self) -> usize {
        2 * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    /// Parameter spacing `π/n`.
    pub fn step(&self) -> f64 {
        PI / self.n as f64
    }

    pub fn default_clearance(&self) -> f64 {
        self.curve.default_clearance(self.n)
    }
}

/// Which part of the plane a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// `Ω₀`, outside the outer curve.
    Exterior,
    /// `Ω₁`, between the curves.
    Annulus,
    /// `Ω_h`, inside the inner curve.
    Hole,
    /// Within the clearance band of either curve.
    NearBoundary,
}

impl Region {
    pub fn label(self) -> &'static str {
        match self {
            Region::Exterior => "exterior",
            Region::Annulus => "annulus",
            Region::Hole => "hole",
            Region::NearBoundary => "near-boundary",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Classifies `point` relative to outer curve `Γ₀` and inner curve `Γ₁`.
pub fn classify(point: Point, outer: &Curve, inner: &Curve, clearance: f64) -> Result<Region> {
    let d = outer.distance(point).min(inner.distance(point));
    let in_outer = outer.winding_number(point) != 0;
    let in_inner = inner.winding_number(point) != 0;
    if in_inner && !in_outer {
        return Err(Error::Geometry(format!(
            "point ({}, {}) lies inside the inner curve but outside the outer one",
            point.x, point.y
        )));
    }
    if d < clearance {
        return Ok(Region::NearBoundary);
    }
    Ok(match (in_outer, in_inner) {
        (false, _) => Region::Exterior,
        (true, false) => Region::Annulus,
        (true, true) => Region::Hole,
    })
}

/// Checks that `inner` lies strictly inside `outer`.
pub fn check_nested(outer: &Curve, inner: &Curve) -> Result<()> {
    for p in inner.polygon() {
        if outer.winding_number(*p) != 1 {
            return Err(Error::Geometry(format!(
                "inner curve leaves the outer curve near ({:.4}, {:.4})",
                p.x, p.y
            )));
        }
    }
    for p in outer.polygon() {
        if inner.winding_number(*p) != 0 {
            return Err(Error::Geometry("outer curve enters the inner curve".into()));
        }
    }
    Ok(())
}

/// Region labels for a set of points.
pub fn classify_all(
    points: &[Point],
    outer: &Curve,
    inner: &Curve,
    clearance: f64,
    exec: Exec,
) -> Result<Vec<Region>> {
    exec.map(points.len(), |i| classify(points[i], outer, inner, clearance))
        .into_iter()
        .collect()
}

fn signed_area(pts: &[Point]) -> f64 {
    let m = pts.len();
    0.5 * (0..m).map(|i| pts[i].cross(pts[(i + 1) % m])).sum::<f64>()
}

fn winding_number(pts: &[Point], p: Point) -> i32 {
    let m = pts.len();
    let mut wn = 0;
    for i in 0..m {
        let a = pts[i];
        let b = pts[(i + 1) % m];
        let side = (b - a).cross(p - a);
        if a.y <= p.y {
            if b.y > p.y && side > 0.0 {
                wn += 1;
            }
        } else if b.y <= p.y && side < 0.0 {
            wn -= 1;
        }
    }
    wn
}

fn polyline_distance(pts: &[Point], p: Point) -> f64 {
    let m = pts.len();
    let mut best = f64::INFINITY;
    for i in 0..m {
        let a = pts[i];
        let ab = pts[(i + 1) % m] - a;
        let s = ((p - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
        let d = (a + ab * s - p).norm();
        best = best.min(d);
    }
    best
}

fn segments_cross(a0: Point, a1: Point, b0: Point, b1: Point) -> bool {
    let d1 = (a1 - a0).cross(b0 - a0);
    let d2 = (a1 - a0).cross(b1 - a0);
    let d3 = (b1 - b0).cross(a0 - b0);
    let d4 = (b1 - b0).cross(a1 - b0);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}
