//! Quantities evaluated from solved densities or closed forms: far-field
//! patterns, near-field grids, the manufactured point-source problem and
//! error norms.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{classify, classify_all, Point, Region};
use crate::operators::potential_weights;
use crate::specfun::bessel01;
use crate::system::{Densities, DerivedParams, Discretization};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Point sources `z₁, z₂` (inside `Γ₀`) and `z₃, z₄` (outside `Γ₀`) of the
/// manufactured problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sources {
    pub z: [Point; 4],
}

impl Sources {
    pub fn new(z1: Point, z2: Point, z3: Point, z4: Point) -> Self {
        Self { z: [z1, z2, z3, z4] }
    }

    /// `z₁, z₂` must be enclosed by `Γ₀` and `z₃, z₄` not, so that the
    /// manufactured fields solve the problem; none may sit on a curve.
    pub fn validate(&self, disc: &Discretization) -> Result<()> {
        for (k, z) in self.z.iter().enumerate() {
            let inside = disc.scene.outer.winding_number(*z) != 0;
            if inside != (k < 2) {
                let want = if k < 2 { "inside" } else { "outside" };
                return Err(Error::Placement(format!(
                    "z{} = ({}, {}) must lie {want} the outer curve",
                    k + 1,
                    z.x,
                    z.y
                )));
            }
        }
        self.check_off_nodes(disc)
    }

    /// Fails if a source coincides with a boundary node.
    pub fn check_off_nodes(&self, disc: &Discretization) -> Result<()> {
        for (k, z) in self.z.iter().enumerate() {
            for grid in [&disc.outer, &disc.inner] {
                if grid.position.iter().any(|x| x.distance(*z) == 0.0) {
                    return Err(Error::Placement(format!("z{} coincides with a boundary node", k + 1)));
                }
            }
        }
        Ok(())
    }
}

/// Boundary data `f₁…f₄` on `Γ₀` nodes and `f₅, f₆` on `Γ₁` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ManufacturedData {
    pub f1: Vec<Complex64>,
    pub f2: Vec<Complex64>,
    pub f3: Vec<Complex64>,
    pub f4: Vec<Complex64>,
    pub f5: Vec<Complex64>,
    pub f6: Vec<Complex64>,
}

/// `(H₀(κr), κH₁(κr)(v·r)/r)` for `r = x − z`, i.e. the value and the
/// negated derivative along `v` of `H₀(κ|x − z|)`.
fn point_source(kappa: f64, x: Point, z: Point, v: Point) -> Result<(Complex64, Complex64)> {
    let r = x - z;
    let d = r.norm();
    if d == 0.0 {
        return Err(Error::Placement(format!("evaluation point coincides with source ({}, {})", z.x, z.y)));
    }
    let b = bessel01(kappa * d)?;
    Ok((b.h0(), kappa * b.h1() * (v.dot(r) / d)))
}

pub fn manufactured_data(disc: &Discretization, sources: &Sources) -> Result<ManufacturedData> {
    sources.check_off_nodes(disc)?;
    let p = &disc.params;
    let w = p.omega;
    let (k0, k1) = (p.kappa0, p.kappa1);
    let [z1, z2, z3, z4] = sources.z;
    let g = &disc.outer;
    let len = g.len();
    let mut f = ManufacturedData {
        f1: Vec::with_capacity(len),
        f2: Vec::with_capacity(len),
        f3: Vec::with_capacity(len),
        f4: Vec::with_capacity(len),
        f5: Vec::new(),
        f6: Vec::new(),
    };
    for k in 0..len {
        let (x, n, t) = (g.position[k], g.normal[k], g.tangent[k]);
        let (h3, n3) = point_source(k1, x, z3, n)?;
        let (_, t3) = point_source(k1, x, z3, t)?;
        let (h4, n4) = point_source(k1, x, z4, n)?;
        let (_, t4) = point_source(k1, x, z4, t)?;
        let (h1, n1) = point_source(k0, x, z1, n)?;
        let (_, t1) = point_source(k0, x, z1, t)?;
        let (h2, n2) = point_source(k0, x, z2, n)?;
        let (_, t2) = point_source(k0, x, z2, t)?;
        f.f1.push(h3 - h1);
        f.f2.push(-p.mu_t1 * w * n4 - p.beta1 * t3 + p.mu_t0 * w * n2 + p.beta0 * t1);
        f.f3.push(h4 - h2);
        f.f4.push(-p.eps_t1 * w * n3 + p.beta1 * t4 + p.eps_t0 * w * n1 - p.beta0 * t2);
    }
    let g = &disc.inner;
    for k in 0..g.len() {
        let (x, n, t) = (g.position[k], g.normal[k], g.tangent[k]);
        let lam = disc.lambda[k];
        let (h3, n3) = point_source(k1, x, z3, n)?;
        let (_, t3) = point_source(k1, x, z3, t)?;
        let (h4, n4) = point_source(k1, x, z4, n)?;
        let (_, t4) = point_source(k1, x, z4, t)?;
        f.f5.push(-p.mu_t1 * w * n4 - p.beta1 * t3 + I * lam * h4);
        f.f6.push(-lam * p.eps_t1 * w * n3 + lam * p.beta1 * t4 + I * h3);
    }
    Ok(f)
}

/// Exact manufactured fields `(e, h)` at `x`, which must lie in `region`
/// (exterior or annulus).
pub fn exact_fields(disc: &Discretization, sources: &Sources, x: Point, region: Region) -> Result<(Complex64, Complex64)> {
    let actual = classify(x, &disc.scene.outer, &disc.scene.inner, 0.0)?;
    if actual != region {
        return Err(Error::RegionMismatch {
            expected: region.to_string(),
            actual: actual.to_string(),
        });
    }
    exact_fields_unchecked(&disc.params, sources, x, region)
}

/// As [`exact_fields`] without the region check.
pub fn exact_fields_unchecked(params: &DerivedParams, sources: &Sources, x: Point, region: Region) -> Result<(Complex64, Complex64)> {
    let (kappa, a, b) = match region {
        Region::Exterior => (params.kappa0, sources.z[0], sources.z[1]),
        Region::Annulus => (params.kappa1, sources.z[2], sources.z[3]),
        other => {
            return Err(Error::RegionMismatch {
                expected: "exterior or annulus".into(),
                actual: other.to_string(),
            })
        }
    };
    let v = Point::default();
    Ok((point_source(kappa, x, a, v)?.0, point_source(kappa, x, b, v)?.0))
}

/// Unit direction `x̂(t) = (cos t, sin t)`.
pub fn direction(t: f64) -> Point {
    Point::new(t.cos(), t.sin())
}

/// `M` equispaced observation angles `2πi/M`.
pub fn directions(m: usize) -> Vec<f64> {
    (0..m).map(|i| 2.0 * PI * i as f64 / m as f64).collect()
}

/// Far-field pattern of `H₀⁽¹⁾(κ₀|x − z|)` in direction `x̂(t)`.
pub fn exact_farfield(kappa0: f64, z: Point, t: f64) -> Complex64 {
    let c = -4.0 * I * Complex64::from_polar(1.0, FRAC_PI_4) / (8.0 * PI * kappa0).sqrt();
    c * Complex64::from_polar(1.0, -kappa0 * direction(t).dot(z))
}

/// Far-field samples of the scattered electric and magnetic fields.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FarField {
    pub t: Vec<f64>,
    pub e: Vec<Complex64>,
    pub h: Vec<Complex64>,
}

/// Far field of the exterior representation `𝒟φ₀ − 𝒮ψ₀` by the trapezoid rule.
pub fn computed_farfield(disc: &Discretization, dens: &Densities, t: &[f64], exec: Exec) -> FarField {
    let g = &disc.outer;
    let k0 = disc.params.kappa0;
    let c = Complex64::from_polar(1.0, FRAC_PI_4) / (8.0 * PI * k0).sqrt() * g.step();
    let values = exec.map(t.len(), |i| {
        let xh = direction(t[i]);
        let mut e = Complex64::default();
        let mut h = Complex64::default();
        for k in 0..g.len() {
            let w = Complex64::from_polar(g.speed[k], -k0 * xh.dot(g.position[k]));
            let dn = -I * k0 * xh.dot(g.normal[k]);
            e += w * (dn * dens.phi0e[k] - dens.psi0e[k]);
            h += w * (dn * dens.phi0h[k] - dens.psi0h[k]);
        }
        (e * c, h * c)
    });
    FarField {
        t: t.to_vec(),
        e: values.iter().map(|v| v.0).collect(),
        h: values.iter().map(|v| v.1).collect(),
    }
}

/// Exact far fields of the manufactured problem at angles `t`.
pub fn exact_farfield_samples(params: &DerivedParams, sources: &Sources, t: &[f64]) -> FarField {
    FarField {
        t: t.to_vec(),
        e: t.iter().map(|&s| exact_farfield(params.kappa0, sources.z[0], s)).collect(),
        h: t.iter().map(|&s| exact_farfield(params.kappa0, sources.z[1], s)).collect(),
    }
}

/// `√((2π/M) Σ |a_i − b_i|²)`.
pub fn farfield_error_l2(computed: &[Complex64], exact: &[Complex64]) -> Result<f64> {
    if computed.len() != exact.len() || computed.is_empty() {
        return Err(Error::Argument(format!(
            "far-field sets differ in size: {} vs {}",
            computed.len(),
            exact.len()
        )));
    }
    let m = computed.len() as f64;
    let s: f64 = computed.iter().zip(exact).map(|(a, b)| (a - b).norm_sqr()).sum();
    Ok((2.0 * PI / m * s).sqrt())
}

/// Field values at a point off the boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldValue {
    pub region: Region,
    /// Scattered field in the exterior, interior field in the annulus.
    pub e: Complex64,
    pub h: Complex64,
    /// `e` plus the incident wave in the exterior; equal to `e` elsewhere.
    pub e_total: Complex64,
}

fn dot(w: &[(Complex64, Complex64)], f: &[Complex64], single: bool) -> Complex64 {
    w.iter()
        .zip(f)
        .map(|(p, v)| if single { p.0 * v } else { p.1 * v })
        .sum()
}

/// Evaluates the representation formulas at `x` whose region is known.
/// Returns `None` for hole and near-boundary points.
pub fn field_in_region(disc: &Discretization, dens: &Densities, x: Point, region: Region) -> Option<FieldValue> {
    let p = &disc.params;
    match region {
        Region::Exterior => {
            let w = potential_weights(&disc.outer, p.kappa0, x);
            let e = dot(&w, &dens.phi0e, false) - dot(&w, &dens.psi0e, true);
            let h = dot(&w, &dens.phi0h, false) - dot(&w, &dens.psi0h, true);
            Some(FieldValue {
                region,
                e,
                h,
                e_total: e + disc.incident_field(x),
            })
        }
        Region::Annulus => {
            let w0 = potential_weights(&disc.outer, p.kappa1, x);
            let w1 = potential_weights(&disc.inner, p.kappa1, x);
            let e = dot(&w0, &dens.psi1e, true) + dot(&w1, &dens.psi2e, true);
            let h = dot(&w0, &dens.psi1h, true) + dot(&w1, &dens.psi2h, true);
            Some(FieldValue {
                region,
                e,
                h,
                e_total: e,
            })
        }
        Region::Hole | Region::NearBoundary => None,
    }
}

/// Classifies `x` and evaluates the fields there. Points within `clearance`
/// of a curve are an error.
pub fn field_at(disc: &Discretization, dens: &Densities, x: Point, clearance: f64) -> Result<Option<FieldValue>> {
    let region = classify(x, &disc.scene.outer, &disc.scene.inner, clearance)?;
    if region == Region::NearBoundary {
        let distance = disc.scene.outer.distance(x).min(disc.scene.inner.distance(x));
        return Err(Error::MaskedTarget { distance, clearance });
    }
    Ok(field_in_region(disc, dens, x, region))
}

/// Square evaluation grid `x_kj = (−c + kδ, −c + jδ)`, `k, j = 0..2m`,
/// `δ = 2c/(2m − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub c: f64,
    pub m: usize,
    pub clearance: f64,
}

impl GridSpec {
    pub fn side(&self) -> usize {
        2 * self.m
    }

    pub fn step(&self) -> f64 {
        2.0 * self.c / (2 * self.m - 1) as f64
    }

    /// Point `x_kj`; `k` runs along x, `j` along y.
    pub fn point(&self, k: usize, j: usize) -> Point {
        let d = self.step();
        Point::new(-self.c + k as f64 * d, -self.c + j as f64 * d)
    }

    /// All points, `j`-major.
    pub fn points(&self) -> Vec<Point> {
        let s = self.side();
        (0..s * s).map(|i| self.point(i % s, i / s)).collect()
    }
}

/// Near-field values on a [`GridSpec`] with region labels; masked points
/// carry `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid {
    pub spec: GridSpec,
    pub region: Vec<Region>,
    pub e: Vec<Option<Complex64>>,
    pub e_total: Vec<Option<Complex64>>,
    pub h: Vec<Option<Complex64>>,
}

impl FieldGrid {
    /// Flat index of `x_kj`.
    pub fn index(&self, k: usize, j: usize) -> usize {
        j * self.spec.side() + k
    }
}

pub fn near_field(disc: &Discretization, dens: &Densities, spec: GridSpec, exec: Exec) -> Result<FieldGrid> {
    if spec.m == 0 || !(spec.c > 0.0) || !(spec.clearance >= 0.0) {
        return Err(Error::Argument(format!(
            "grid needs m >= 1, c > 0 and clearance >= 0, got m = {}, c = {}, clearance = {}",
            spec.m, spec.c, spec.clearance
        )));
    }
    let points = spec.points();
    let region = classify_all(&points, &disc.scene.outer, &disc.scene.inner, spec.clearance, exec)?;
    let values = exec.map(points.len(), |i| field_in_region(disc, dens, points[i], region[i]));
    Ok(FieldGrid {
        spec,
        e: values.iter().map(|v| v.map(|f| f.e)).collect(),
        e_total: values.iter().map(|v| v.map(|f| f.e_total)).collect(),
        h: values.iter().map(|v| v.map(|f| f.h)).collect(),
        region,
    })
}
