//! Scene parameters, assembly of the block system `(I + K) φ = g`, right-hand
//! sides and the dense solve.
//!
//! Unknowns are ordered `φ = (φ₀ᵉ, ψ₁ʰ, φ₀ʰ, ψ₁ᵉ, ψ₂ʰ, ψ₂ᵉ)`; the first four
//! blocks live on the outer curve `Γ₀`, the last two on the inner curve `Γ₁`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::Range;

use nalgebra::{DMatrixView, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fields::{manufactured_data, Sources};
use crate::geometry::{check_nested, BoundaryGrid, Curve};
use crate::operators::{CMatrix, OperatorAssembler, OperatorBlock, TangentialRoute};
use crate::quadrature::DiffMatrix;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Pivot ratio of the LU factorization below which the system is reported
/// as numerically singular.
pub const SINGULARITY_THRESHOLD: f64 = 1e-13;

/// Impedance `λ` on the inner curve as a function of the parameter `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Impedance {
    Constant { value: f64 },
    /// `λ(t) = 1 / (offset + amplitude·cos t)`
    ReciprocalCosine { offset: f64, amplitude: f64 },
}

impl Impedance {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Impedance::Constant { value } => value,
            Impedance::ReciprocalCosine { offset, amplitude } => 1.0 / (offset + amplitude * t.cos()),
        }
    }

    /// Node values on `grid`; every value must be positive and finite.
    pub fn sample(&self, grid: &BoundaryGrid) -> Result<Vec<f64>> {
        grid.t
            .iter()
            .enumerate()
            .map(|(node, &t)| {
                let value = self.eval(t);
                if value > 0.0 && value.is_finite() {
                    Ok(value)
                } else {
                    Err(Error::Impedance { node, value })
                }
            })
            .collect()
    }
}

/// The physical problem: material constants, incidence and the two curves.
#[derive(Debug, Clone)]
pub struct Scene {
    pub omega: f64,
    /// Polar angle of incidence measured from the cylinder axis.
    pub theta: f64,
    /// Azimuth of the incident direction in the cross-section.
    pub phi: f64,
    pub eps0: f64,
    pub mu0: f64,
    pub eps1: f64,
    pub mu1: f64,
    pub impedance: Impedance,
    pub outer: Curve,
    pub inner: Curve,
}

/// Reduced wavenumbers and scaled material coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    pub omega: f64,
    pub k0: f64,
    pub beta: f64,
    pub kappa0: f64,
    pub kappa1: f64,
    pub mu_t0: f64,
    pub mu_t1: f64,
    pub eps_t0: f64,
    pub eps_t1: f64,
    pub beta0: f64,
    pub beta1: f64,
}

impl Scene {
    pub fn derive(&self) -> Result<DerivedParams> {
        derive_params(self)
    }
}

/// `cos θ` with the value at `θ = π/2` snapped to an exact zero.
fn axial_cosine(theta: f64) -> f64 {
    if (theta - FRAC_PI_2).abs() <= 4.0 * f64::EPSILON {
        0.0
    } else {
        theta.cos()
    }
}

pub fn derive_params(scene: &Scene) -> Result<DerivedParams> {
    let positive = [
        ("omega", scene.omega),
        ("eps0", scene.eps0),
        ("mu0", scene.mu0),
        ("eps1", scene.eps1),
        ("mu1", scene.mu1),
    ];
    for (name, v) in positive {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Parameter(format!("{name} must be positive, got {v}")));
        }
    }
    if !(scene.theta > 0.0 && scene.theta < PI) {
        return Err(Error::Parameter(format!("theta must lie in (0, pi), got {}", scene.theta)));
    }
    if !scene.phi.is_finite() {
        return Err(Error::Parameter("phi must be finite".into()));
    }
    let omega = scene.omega;
    let k0 = omega * (scene.mu0 * scene.eps0).sqrt();
    let cos = axial_cosine(scene.theta);
    let beta = k0 * cos;
    let kappa0 = k0 * scene.theta.sin();
    let mu_eps1 = scene.mu1 * scene.eps1;
    let bound = scene.mu0 * scene.eps0 * cos * cos;
    let kappa1_sq = mu_eps1 * omega * omega - beta * beta;
    if mu_eps1 <= bound || kappa1_sq <= 0.0 {
        return Err(Error::InfeasibleAngle { mu_eps1, bound });
    }
    let kappa1 = kappa1_sq.sqrt();
    let k0sq = kappa0 * kappa0;
    Ok(DerivedParams {
        omega,
        k0,
        beta,
        kappa0,
        kappa1,
        mu_t0: scene.mu0 / k0sq,
        mu_t1: scene.mu1 / kappa1_sq,
        eps_t0: scene.eps0 / k0sq,
        eps_t1: scene.eps1 / kappa1_sq,
        beta0: beta / k0sq,
        beta1: beta / kappa1_sq,
    })
}

/// A scene together with node grids on both curves.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub scene: Scene,
    pub params: DerivedParams,
    pub outer: BoundaryGrid,
    pub inner: BoundaryGrid,
    /// `λ` at the inner-curve nodes.
    pub lambda: Vec<f64>,
}

/// Index of each unknown block.
pub mod unknown {
    pub const PHI0_E: usize = 0;
    pub const PSI1_H: usize = 1;
    pub const PHI0_H: usize = 2;
    pub const PSI1_E: usize = 3;
    pub const PSI2_H: usize = 4;
    pub const PSI2_E: usize = 5;
    /// Blocks carrying the electric chain at normal incidence.
    pub const ELECTRIC: [usize; 3] = [PHI0_E, PSI1_E, PSI2_E];
    /// Blocks carrying the magnetic chain at normal incidence.
    pub const MAGNETIC: [usize; 3] = [PSI1_H, PHI0_H, PSI2_H];
}

impl Discretization {
    pub fn new(scene: &Scene, n0: usize, n1: usize) -> Result<Self> {
        let params = scene.derive()?;
        check_nested(&scene.outer, &scene.inner)?;
        let outer = BoundaryGrid::new(&scene.outer, n0)?;
        let inner = BoundaryGrid::new(&scene.inner, n1)?;
        let lambda = scene.impedance.sample(&inner)?;
        Ok(Self {
            scene: scene.clone(),
            params,
            outer,
            inner,
            lambda,
        })
    }

    /// Node counts of the six unknown blocks.
    pub fn block_sizes(&self) -> [usize; 6] {
        let a = self.outer.len();
        let b = self.inner.len();
        [a, a, a, a, b, b]
    }

    pub fn assemble(&self, exec: Exec) -> Result<BlockSystem> {
        self.assemble_with(exec, TangentialRoute::default())
    }

    /// Builds `I + K`.
    pub fn assemble_with(&self, exec: Exec, route: TangentialRoute) -> Result<BlockSystem> {
        let p = &self.params;
        let w = p.omega;
        let (k0, k1) = (p.kappa0, p.kappa1);
        let ops = OperatorAssembler::new(&[&self.outer, &self.inner], exec)?.with_tangential_route(route);

        let s000 = ops.single_layer(k0, 0, 0)?;
        let d000 = ops.double_layer(k0, 0, 0)?;
        let ns000 = ops.normal_deriv_single(k0, 0, 0)?;
        let nd000 = ops.hypersingular_from_single(&s000);

        let s100 = ops.single_layer(k1, 0, 0)?;
        let ns100 = ops.normal_deriv_single(k1, 0, 0)?;
        let ts100 = self.tangential(&ops, &s100, route)?;
        let s101 = ops.single_layer(k1, 0, 1)?;
        let ns101 = ops.normal_deriv_single(k1, 0, 1)?;
        let ts101 = ops.tangential_single(k1, 0, 1)?;
        let s110 = ops.single_layer(k1, 1, 0)?;
        let ns110 = ops.normal_deriv_single(k1, 1, 0)?;
        let ts110 = ops.tangential_single(k1, 1, 0)?;
        let s111 = ops.single_layer(k1, 1, 1)?;
        let ns111 = ops.normal_deriv_single(k1, 1, 1)?;
        let ts111 = self.tangential(&ops, &s111, route)?;

        let sizes = self.block_sizes();
        let mut sys = BlockSystem::identity(sizes);
        let c = |z: f64| Complex64::new(z, 0.0);

        // Rows 1 and 3: transmission of e and h across Γ₀.
        let two_d = &d000.matrix * c(2.0);
        sys.set(0, 0, &two_d);
        sys.set(0, 3, &((&s100.matrix - &s000.matrix * c(p.eps_t1 / p.eps_t0)) * c(-2.0)));
        sys.set(0, 5, &(&s101.matrix * c(-2.0)));
        sys.set(2, 2, &two_d);
        sys.set(2, 1, &((&s100.matrix - &s000.matrix * c(p.mu_t1 / p.mu_t0)) * c(-2.0)));
        sys.set(2, 4, &(&s101.matrix * c(-2.0)));

        // Rows 2 and 4: normal-derivative conditions on Γ₀.
        let ns_diff = &ns100.matrix - &ns000.matrix;
        let coupling_h = (p.beta1 - p.beta0) / (p.mu_t1 * w);
        let coupling_e = (p.beta0 - p.beta1) / (p.eps_t1 * w);
        sys.set(1, 1, &ns_diff);
        sys.set(1, 2, &(&nd000.matrix * c(-p.mu_t0 / p.mu_t1)));
        sys.set(1, 3, &(&ts100.matrix * c(coupling_h)));
        sys.set(1, 4, &ns101.matrix);
        sys.set(1, 5, &(&ts101.matrix * c(coupling_h)));
        sys.set(3, 0, &(&nd000.matrix * c(-p.eps_t0 / p.eps_t1)));
        sys.set(3, 1, &(&ts100.matrix * c(coupling_e)));
        sys.set(3, 3, &ns_diff);
        sys.set(3, 4, &(&ts101.matrix * c(coupling_e)));
        sys.set(3, 5, &ns101.matrix);

        // Row 5: impedance condition for h on Γ₁.
        let lam = &self.lambda;
        let row5 = c(-2.0 / (p.mu_t1 * w));
        sys.set(4, 1, &((&ns110.matrix * c(p.mu_t1 * w) + scale_rows(&s110.matrix, lam, I)) * row5));
        sys.set(4, 3, &(&ts110.matrix * (c(p.beta1) * row5)));
        sys.set(4, 4, &((&ns111.matrix * c(p.mu_t1 * w) + scale_rows(&s111.matrix, lam, I)) * row5));
        sys.set(4, 5, &(&ts111.matrix * (c(p.beta1) * row5)));

        // Row 6: impedance condition for e on Γ₁, scaled by −2/(λ ε̃₁ ω).
        let inv: Vec<f64> = lam.iter().map(|l| -2.0 / (l * p.eps_t1 * w)).collect();
        let one = c(1.0);
        let c62 = scale_rows(&ts110.matrix, lam, c(-p.beta1));
        let c64 = scale_rows(&ns110.matrix, lam, c(p.eps_t1 * w)) + &s110.matrix * I;
        let c65 = scale_rows(&ts111.matrix, lam, c(-p.beta1));
        let c66 = scale_rows(&ns111.matrix, lam, c(p.eps_t1 * w)) + &s111.matrix * I;
        sys.set(5, 1, &scale_rows(&c62, &inv, one));
        sys.set(5, 3, &scale_rows(&c64, &inv, one));
        sys.set(5, 4, &scale_rows(&c65, &inv, one));
        sys.set(5, 5, &scale_rows(&c66, &inv, one));
        Ok(sys)
    }

    fn tangential(&self, ops: &OperatorAssembler<'_>, single: &OperatorBlock, route: TangentialRoute) -> Result<OperatorBlock> {
        match route {
            TangentialRoute::Differentiation => Ok(ops.tangential_from_single(single)),
            TangentialRoute::CauchySplit => ops.tangential_single_split(single.kappa, single.target, single.source),
        }
    }

    /// Incident plane wave `e^inc = sin θ/√ε₀ · exp(iκ₀ d̂·x)`, `h^inc = 0`.
    pub fn incident_field(&self, x: crate::geometry::Point) -> Complex64 {
        let s = &self.scene;
        let amp = s.theta.sin() / s.eps0.sqrt();
        let phase = self.params.kappa0 * (x.x * s.phi.cos() + x.y * s.phi.sin());
        Complex64::from_polar(amp, phase)
    }

    /// `g = (−2e^inc, 0, 0, (ε̃₀/ε̃₁) ∂ₙe^inc, 0, 0)`.
    pub fn rhs_incident(&self) -> Vec<Complex64> {
        let p = &self.params;
        let s = &self.scene;
        let dir = crate::geometry::Point::new(s.phi.cos(), s.phi.sin());
        let sizes = self.block_sizes();
        let mut g = vec![Complex64::default(); sizes.iter().sum()];
        let offsets = offsets(&sizes);
        for (k, &x) in self.outer.position.iter().enumerate() {
            let e = self.incident_field(x);
            g[offsets[0] + k] = -2.0 * e;
            let dn = I * p.kappa0 * self.outer.normal[k].dot(dir) * e;
            g[offsets[3] + k] = dn * (p.eps_t0 / p.eps_t1);
        }
        g
    }

    /// Right-hand side `g_f` of the manufactured problem with point sources.
    pub fn rhs_manufactured(&self, sources: &Sources) -> Result<Vec<Complex64>> {
        let p = &self.params;
        let w = p.omega;
        let f = manufactured_data(self, sources)?;
        let diff = DiffMatrix::new(self.outer.n())?;
        let dt1 = diff.tangential(&f.f1, &self.outer.speed);
        let dt3 = diff.tangential(&f.f3, &self.outer.speed);
        let mut g = Vec::with_capacity(self.block_sizes().iter().sum());
        g.extend(f.f1.iter().map(|v| -2.0 * v));
        g.extend(
            dt1.iter()
                .zip(&f.f2)
                .map(|(d, v)| (-p.beta0 * d + v) / (p.mu_t1 * w)),
        );
        g.extend(f.f3.iter().map(|v| -2.0 * v));
        g.extend(
            dt3.iter()
                .zip(&f.f4)
                .map(|(d, v)| (p.beta0 * d + v) / (p.eps_t1 * w)),
        );
        g.extend(f.f5.iter().map(|v| v * (-2.0 / (p.mu_t1 * w))));
        g.extend(
            f.f6.iter()
                .zip(&self.lambda)
                .map(|(v, l)| v * (-2.0 / (l * p.eps_t1 * w))),
        );
        Ok(g)
    }

    /// Splits a solution vector into its six blocks and recovers `ψ₀ᵉ`, `ψ₀ʰ`.
    pub fn densities(&self, solution: &[Complex64]) -> Result<Densities> {
        let sizes = self.block_sizes();
        if solution.len() != sizes.iter().sum::<usize>() {
            return Err(Error::Argument(format!(
                "solution has {} entries, system has {}",
                solution.len(),
                sizes.iter().sum::<usize>()
            )));
        }
        let o = offsets(&sizes);
        let block = |b: usize| solution[o[b]..o[b] + sizes[b]].to_vec();
        let p = &self.params;
        let psi1e = block(unknown::PSI1_E);
        let psi1h = block(unknown::PSI1_H);
        Ok(Densities {
            psi0e: psi1e.iter().map(|v| -(p.eps_t1 / p.eps_t0) * v).collect(),
            psi0h: psi1h.iter().map(|v| -(p.mu_t1 / p.mu_t0) * v).collect(),
            phi0e: block(unknown::PHI0_E),
            psi1h,
            phi0h: block(unknown::PHI0_H),
            psi1e,
            psi2h: block(unknown::PSI2_H),
            psi2e: block(unknown::PSI2_E),
        })
    }

    /// Assembles, solves and splits in one go.
    pub fn solve(&self, rhs: &[Complex64], exec: Exec) -> Result<Densities> {
        let sys = self.assemble(exec)?;
        let x = sys.solve(rhs)?;
        self.densities(&x)
    }
}

fn scale_rows(m: &CMatrix, d: &[f64], factor: Complex64) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * (factor * d[i]))
}

fn offsets(sizes: &[usize; 6]) -> [usize; 7] {
    let mut o = [0; 7];
    for b in 0..6 {
        o[b + 1] = o[b] + sizes[b];
    }
    o
}

/// Solved densities, including the eliminated `ψ₀ᵉ` and `ψ₀ʰ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Densities {
    pub phi0e: Vec<Complex64>,
    pub psi1h: Vec<Complex64>,
    pub phi0h: Vec<Complex64>,
    pub psi1e: Vec<Complex64>,
    pub psi2h: Vec<Complex64>,
    pub psi2e: Vec<Complex64>,
    pub psi0e: Vec<Complex64>,
    pub psi0h: Vec<Complex64>,
}

/// The dense matrix `I + K` with its block layout.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSystem {
    pub matrix: CMatrix,
    sizes: [usize; 6],
    offsets: [usize; 7],
}

impl BlockSystem {
    fn identity(sizes: [usize; 6]) -> Self {
        let offsets = offsets(&sizes);
        let n = offsets[6];
        Self {
            matrix: CMatrix::identity(n, n),
            sizes,
            offsets,
        }
    }

    /// Adds `block` to the `(row, col)` block; the identity stays in place.
    fn set(&mut self, row: usize, col: usize, block: &CMatrix) {
        let (r, c) = (self.offsets[row], self.offsets[col]);
        let mut view = self.matrix.view_mut((r, c), (self.sizes[row], self.sizes[col]));
        view += block;
    }

    pub fn dim(&self) -> usize {
        self.offsets[6]
    }

    pub fn block_range(&self, b: usize) -> Range<usize> {
        self.offsets[b]..self.offsets[b + 1]
    }

    pub fn block(&self, row: usize, col: usize) -> DMatrixView<'_, Complex64> {
        self.matrix
            .view((self.offsets[row], self.offsets[col]), (self.sizes[row], self.sizes[col]))
    }

    /// The `(row, col)` block of `K = A − I`.
    pub fn k_block(&self, row: usize, col: usize) -> CMatrix {
        let mut b = self.block(row, col).into_owned();
        if row == col {
            for i in 0..b.nrows() {
                b[(i, i)] -= Complex64::new(1.0, 0.0);
            }
        }
        b
    }

    pub fn is_zero_block(&self, row: usize, col: usize) -> bool {
        self.k_block(row, col).iter().all(|v| *v == Complex64::default())
    }

    /// Dense LU solve with partial pivoting.
    pub fn solve(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        solve_dense(&self.matrix, rhs)
    }

    /// Solves the electric and magnetic chains separately. Only valid when
    /// every block coupling the two chains vanishes, as at normal incidence.
    pub fn solve_split(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        for &r in &unknown::ELECTRIC {
            for &c in &unknown::MAGNETIC {
                if !self.is_zero_block(r, c) || !self.is_zero_block(c, r) {
                    return Err(Error::Argument(format!(
                        "blocks ({}, {}) couple the electric and magnetic unknowns",
                        r + 1,
                        c + 1
                    )));
                }
            }
        }
        if rhs.len() != self.dim() {
            return Err(Error::Argument(format!(
                "right-hand side has {} entries, system has {}",
                rhs.len(),
                self.dim()
            )));
        }
        let mut x = vec![Complex64::default(); self.dim()];
        for chain in [unknown::ELECTRIC, unknown::MAGNETIC] {
            let idx: Vec<usize> = chain.iter().flat_map(|&b| self.block_range(b)).collect();
            let sub = CMatrix::from_fn(idx.len(), idx.len(), |i, j| self.matrix[(idx[i], idx[j])]);
            let b: Vec<Complex64> = idx.iter().map(|&i| rhs[i]).collect();
            let y = solve_dense(&sub, &b)?;
            for (k, &i) in idx.iter().enumerate() {
                x[i] = y[k];
            }
        }
        Ok(x)
    }

    /// `‖Aφ − g‖∞ / ‖g‖∞`, or `‖Aφ‖∞` when `g = 0`.
    pub fn relative_residual(&self, x: &[Complex64], rhs: &[Complex64]) -> f64 {
        let ax = &self.matrix * DVector::from_column_slice(x);
        let r = ax
            .iter()
            .zip(rhs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let g = rhs.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if g > 0.0 {
            r / g
        } else {
            r
        }
    }
}

fn solve_dense(a: &CMatrix, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    if rhs.len() != a.nrows() {
        return Err(Error::Argument(format!(
            "right-hand side has {} entries, system has {}",
            rhs.len(),
            a.nrows()
        )));
    }
    let lu = a.clone().lu();
    let u = lu.u();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..u.nrows() {
        let d = u[(i, i)].norm();
        lo = lo.min(d);
        hi = hi.max(d);
    }
    let pivot_ratio = if hi > 0.0 { lo / hi } else { 0.0 };
    if !(pivot_ratio >= SINGULARITY_THRESHOLD) {
        return Err(Error::IrregularWavenumber { pivot_ratio });
    }
    let x = lu
        .solve(&DVector::from_column_slice(rhs))
        .ok_or(Error::IrregularWavenumber { pivot_ratio })?;
    Ok(x.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    pub(crate) fn example1() -> Scene {
        Scene {
            omega: 1.0,
            theta: PI / 3.0,
            phi: 0.0,
            eps0: 1.0,
            mu0: 1.0,
            eps1: 3.0,
            mu1: 2.0,
            impedance: Impedance::Constant { value: 2.0 },
            outer: Curve::circle(Point::default(), 0.5).unwrap(),
            inner: Curve::kite(),
        }
    }

    #[test]
    fn example_parameters() {
        let p = example1().derive().unwrap();
        assert!((p.k0 - 1.0).abs() < 1e-15);
        assert!((p.beta - 0.5).abs() < 1e-15);
        assert!((p.kappa0 - 0.8660254038).abs() < 1e-10);
        assert!((p.kappa1 - 2.3979157617).abs() < 1e-10);
        let mut s = example1();
        s.omega = 2.0;
        s.theta = PI / 4.0;
        s.eps0 = 2.0;
        s.eps1 = 4.0;
        let p = s.derive().unwrap();
        assert!((p.k0 - 2.0 * 2f64.sqrt()).abs() < 1e-14);
        assert!((p.beta - 2.0).abs() < 1e-14);
        assert!((p.kappa0 - 2.0).abs() < 1e-14);
        assert!((p.kappa1 - 28f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn normal_incidence_has_no_axial_wavenumber() {
        let mut s = example1();
        s.theta = FRAC_PI_2;
        let p = s.derive().unwrap();
        assert_eq!(p.beta, 0.0);
        assert_eq!(p.beta0, 0.0);
        assert_eq!(p.beta1, 0.0);
    }

    #[test]
    fn infeasible_angle_is_rejected() {
        let mut s = example1();
        s.eps1 = 0.1;
        s.mu1 = 0.1;
        s.theta = 0.1;
        assert!(matches!(s.derive(), Err(Error::InfeasibleAngle { .. })));
        s.theta = 0.0;
        assert!(matches!(s.derive(), Err(Error::Parameter(_))));
    }

    #[test]
    fn impedance_must_be_positive() {
        let grid = BoundaryGrid::new(&Curve::kite(), 8).unwrap();
        let bad = Impedance::ReciprocalCosine { offset: 0.5, amplitude: 1.0 };
        assert!(matches!(bad.sample(&grid), Err(Error::Impedance { .. })));
        let good = Impedance::ReciprocalCosine { offset: 1.0, amplitude: 0.2 };
        assert!((good.eval(0.0) - 1.0 / 1.2).abs() < 1e-15);
        assert!(matches!(
            Impedance::Constant { value: -1.0 }.sample(&grid),
            Err(Error::Impedance { node: 0, .. })
        ));
    }

    #[test]
    fn structural_zero_blocks() {
        let d = Discretization::new(&example1(), 8, 8).unwrap();
        let sys = d.assemble(Exec::Sequential).unwrap();
        assert!(sys.is_zero_block(1, 0));
        assert!(sys.is_zero_block(3, 2));
        assert_eq!(sys.k_block(3, 3), sys.k_block(1, 1));
        assert_eq!(sys.k_block(3, 5), sys.k_block(1, 4));
        assert_eq!(sys.dim(), 4 * 16 + 2 * 16);
    }

    #[test]
    fn homogeneous_system_has_zero_solution() {
        let d = Discretization::new(&example1(), 8, 8).unwrap();
        let sys = d.assemble(Exec::Sequential).unwrap();
        let x = sys.solve(&vec![Complex64::default(); sys.dim()]).unwrap();
        assert!(x.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn incident_rhs_layout() {
        let d = Discretization::new(&example1(), 8, 8).unwrap();
        let g = d.rhs_incident();
        let e = Complex64::from_polar((PI / 3.0).sin(), d.params.kappa0 * 0.5);
        assert!((g[0] + 2.0 * e).norm() < 1e-14);
        let len = d.outer.len();
        assert!(g[len..3 * len].iter().all(|v| v.norm() == 0.0));
        assert!(g[4 * len..].iter().all(|v| v.norm() == 0.0));
        // Node t = π/2 on the circle has normal (0, 1), orthogonal to d̂ = (1, 0).
        assert!(g[3 * len + len / 4].norm() < 1e-15);
    }
}
