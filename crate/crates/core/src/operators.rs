//! Discrete boundary integral operators for the 2D Helmholtz fundamental
//! solution `Φ(x, y) = (i/4) H₀⁽¹⁾(κ|x − y|)`.
//!
//! A block maps density samples on a source grid `Γ_j` to samples on a target
//! grid `Γ_l`. Five families are provided:
//!
//! | family | kernel                 |
//! |--------|------------------------|
//! | `S`    | `Φ`                    |
//! | `D`    | `∂Φ/∂n(y)`             |
//! | `NS`   | `∂Φ/∂n(x)`             |
//! | `ND`   | `∂²Φ/∂n(x)∂n(y)`       |
//! | `TS`   | `∂Φ/∂τ(x)`             |
//!
//! Blocks are principal-value operators; jump terms are added by the caller.
//!
//! Cross-curve blocks use the plain trapezoid rule. Self blocks write the
//! parametrized kernel as `M₁(t,s) ln(4 sin²((t−s)/2)) + M₂(t,s)` and
//! integrate the logarithmic part with [`LogWeights`]. `TS` on a single curve
//! is either the differentiated single layer or a Cauchy/log/smooth split.
//! The split is the default; differentiating a discrete operator loses a
//! factor of `n` in accuracy. `ND` on a single curve is integrated by parts
//!
//! `ND f = d/ds S(df/ds) + κ² n · S(n f)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_PI, PI};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{BoundaryGrid, Point};
use crate::quadrature::{CauchyWeights, DiffMatrix, LogWeights};
use crate::specfun::{bessel01_unchecked, EULER_GAMMA};

pub type CMatrix = DMatrix<Complex64>;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const QUARTER_I: Complex64 = Complex64 { re: 0.0, im: 0.25 };
const FRAC_1_4PI: f64 = 0.25 * FRAC_1_PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Single,
    Double,
    NormalSingle,
    Hypersingular,
    TangentialSingle,
}

impl Family {
    pub fn symbol(self) -> &'static str {
        match self {
            Family::Single => "S",
            Family::Double => "D",
            Family::NormalSingle => "NS",
            Family::Hypersingular => "ND",
            Family::TangentialSingle => "TS",
        }
    }
}

/// How `TS` is built when target and source curve coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TangentialRoute {
    /// Spectral derivative of the single-layer block, divided by `|x′|`.
    Differentiation,
    /// Cauchy + logarithmic + smooth kernel split with matching weights.
    #[default]
    CauchySplit,
}

/// A dense operator block from curve `source` to curve `target`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBlock {
    pub family: Family,
    pub kappa: f64,
    pub target: usize,
    pub source: usize,
    pub matrix: CMatrix,
}

impl OperatorBlock {
    pub fn apply(&self, density: &[Complex64]) -> Vec<Complex64> {
        let v = nalgebra::DVector::from_column_slice(density);
        (&self.matrix * v).iter().copied().collect()
    }

    pub fn is_self_block(&self) -> bool {
        self.target == self.source
    }
}

/// Per-curve quadrature data shared by all blocks on that curve.
#[derive(Debug, Clone)]
struct CurveRules {
    log: LogWeights,
    cauchy: CauchyWeights,
    diff: DiffMatrix,
    /// `ln(4 sin²(kπ/(2n)))` for `k = 1..2n`; entry 0 unused.
    log_sin: Vec<f64>,
    /// `cot(kπ/(2n))`; entry 0 unused.
    cot_half: Vec<f64>,
}

impl CurveRules {
    fn new(n: usize) -> Result<Self> {
        let half = |k: usize| 0.5 * k as f64 * PI / n as f64;
        let log_sin = (0..2 * n)
            .map(|k| if k == 0 { 0.0 } else { (4.0 * half(k).sin().powi(2)).ln() })
            .collect();
        let cot_half = (0..2 * n)
            .map(|k| if k == 0 { 0.0 } else { 1.0 / half(k).tan() })
            .collect();
        Ok(Self {
            log: LogWeights::new(n)?,
            cauchy: CauchyWeights::new(n)?,
            diff: DiffMatrix::new(n)?,
            log_sin,
            cot_half,
        })
    }
}

/// Builds operator blocks on a fixed set of boundary grids.
#[derive(Debug, Clone)]
pub struct OperatorAssembler<'a> {
    grids: Vec<&'a BoundaryGrid>,
    rules: Vec<CurveRules>,
    exec: Exec,
    tangential: TangentialRoute,
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Parameter(format!("wavenumber must be positive, got {kappa}")));
    }
    Ok(())
}

impl<'a> OperatorAssembler<'a> {
    pub fn new(grids: &[&'a BoundaryGrid], exec: Exec) -> Result<Self> {
        let rules = grids
            .iter()
            .map(|g| CurveRules::new(g.n()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grids: grids.to_vec(),
            rules,
            exec,
            tangential: TangentialRoute::default(),
        })
    }

    pub fn with_tangential_route(mut self, route: TangentialRoute) -> Self {
        self.tangential = route;
        self
    }

    pub fn exec(&self) -> Exec {
        self.exec
    }

    pub fn grid(&self, index: usize) -> &BoundaryGrid {
        self.grids[index]
    }

    fn check(&self, kappa: f64, target: usize, source: usize) -> Result<()> {
        check_kappa(kappa)?;
        if target >= self.grids.len() || source >= self.grids.len() {
            return Err(Error::Argument(format!(
                "curve index out of range: target {target}, source {source}, {} curves",
                self.grids.len()
            )));
        }
        Ok(())
    }

    /// Fills a `len(target) × len(source)` matrix column by column.
    fn fill<F>(&self, target: usize, source: usize, entry: F) -> CMatrix
    where
        F: Fn(usize, usize) -> Complex64 + Sync + Send,
    {
        let rows = self.grids[target].len();
        let cols = self.grids[source].len();
        let mut data = vec![Complex64::default(); rows * cols];
        self.exec.for_each_chunk(&mut data, rows, |m, column| {
            for (i, v) in column.iter_mut().enumerate() {
                *v = entry(i, m);
            }
        });
        CMatrix::from_vec(rows, cols, data)
    }

    fn block(&self, family: Family, kappa: f64, target: usize, source: usize, matrix: CMatrix) -> OperatorBlock {
        OperatorBlock {
            family,
            kappa,
            target,
            source,
            matrix,
        }
    }

    /// `S`: `∫ Φ(x, y) f(y) ds(y)`.
    pub fn single_layer(&self, kappa: f64, target: usize, source: usize) -> Result<OperatorBlock> {
        self.check(kappa, target, source)?;
        let src = self.grids[source];
        let h = src.step();
        let matrix = if target == source {
            let rules = &self.rules[source];
            let len = src.len();
            self.fill(target, source, |i, m| {
                let w = rules.log.weight(i, m);
                if i == m {
                    let s = src.speed[i];
                    let m1 = -FRAC_1_4PI * s;
                    let m2 = (QUARTER_I
                        - 0.5 * FRAC_1_PI * ((0.5 * kappa * s).ln() + EULER_GAMMA))
                        * s;
                    return m2 * h + w * m1;
                }
                let r = src.position[i].distance(src.position[m]);
                let b = bessel01_unchecked(kappa * r);
                let s = src.speed[m];
                let full = QUARTER_I * b.h0() * s;
                let m1 = -FRAC_1_4PI * b.order0.j * s;
                let lg = rules.log_sin[(i + len - m) % len];
                (full - m1 * lg) * h + w * m1
            })
        } else {
            let tgt = self.grids[target];
            self.fill(target, source, |i, m| {
                let r = tgt.position[i].distance(src.position[m]);
                QUARTER_I * bessel01_unchecked(kappa * r).h0() * (src.speed[m] * h)
            })
        };
        Ok(self.block(Family::Single, kappa, target, source, matrix))
    }

    /// `D`: `∫ ∂Φ/∂n(y) f(y) ds(y)`, principal value.
    pub fn double_layer(&self, kappa: f64, target: usize, source: usize) -> Result<OperatorBlock> {
        self.check(kappa, target, source)?;
        let src = self.grids[source];
        let tgt = self.grids[target];
        let h = src.step();
        let matrix = if target == source {
            let rules = &self.rules[source];
            let len = src.len();
            self.fill(target, source, |i, m| {
                if i == m {
                    let m2 = FRAC_1_4PI * src.normal[i].dot(src.acceleration[i]) / src.speed[i];
                    return Complex64::new(m2 * h, 0.0);
                }
                let d = src.position[i] - src.position[m];
                let r = d.norm();
                let b = bessel01_unchecked(kappa * r);
                let geo = src.normal[m].dot(d) / r * src.speed[m];
                let full = 0.25 * kappa * I * b.h1() * geo;
                let m1 = -FRAC_1_4PI * kappa * b.order1.j * geo;
                let lg = rules.log_sin[(i + len - m) % len];
                (full - m1 * lg) * h + rules.log.weight(i, m) * m1
            })
        } else {
            self.fill(target, source, |i, m| {
                let d = tgt.position[i] - src.position[m];
                let r = d.norm();
                let b = bessel01_unchecked(kappa * r);
                0.25 * kappa * I * b.h1() * (src.normal[m].dot(d) / r * src.speed[m] * h)
            })
        };
        Ok(self.block(Family::Double, kappa, target, source, matrix))
    }

    /// `NS`: `∫ ∂Φ/∂n(x) f(y) ds(y)`, principal value.
    pub fn normal_deriv_single(&self, kappa: f64, target: usize, source: usize) -> Result<OperatorBlock> {
        self.check(kappa, target, source)?;
        let matrix = self.target_derivative_block(kappa, target, source, |g, i| g.normal[i], |g, i| {
            g.normal[i].dot(g.acceleration[i]) / g.speed[i]
        });
        Ok(self.block(Family::NormalSingle, kappa, target, source, matrix))
    }

    /// `TS`: `∫ ∂Φ/∂τ(x) f(y) ds(y)`.
    pub fn tangential_single(&self, kappa: f64, target: usize, source: usize) -> Result<OperatorBlock> {
        self.check(kappa, target, source)?;
        if target == source && self.tangential == TangentialRoute::Differentiation {
            let s = self.single_layer(kappa, target, source)?;
            return Ok(self.tangential_from_single(&s));
        }
        self.tangential_single_split(kappa, target, source)
    }

    /// `TS` on one curve through the Cauchy/log/smooth split; on distinct
    /// curves the plain smooth kernel.
    pub fn tangential_single_split(&self, kappa: f64, target: usize, source: usize) -> Result<OperatorBlock> {
        self.check(kappa, target, source)?;
        let matrix = if target == source {
            let src = self.grids[source];
            let rules = &self.rules[source];
            let h = src.step();
            let len = src.len();
            self.fill(target, source, |i, m| {
                let cauchy = -FRAC_1_4PI * rules.cauchy.weight(i, m);
                if i == m {
                    let m2 = FRAC_1_4PI * src.tangent[i].dot(src.acceleration[i]) / src.speed[i];
                    return Complex64::new(m2 * h + cauchy, 0.0);
                }
                let d = src.position[i] - src.position[m];
                let r = d.norm();
                let b = bessel01_unchecked(kappa * r);
                let geo = src.tangent[i].dot(d) / r * src.speed[m];
                let full = -0.25 * kappa * I * b.h1() * geo;
                let m1 = FRAC_1_4PI * kappa * b.order1.j * geo;
                let k = (i + len - m) % len;
                let smooth = full - m1 * rules.log_sin[k] + FRAC_1_4PI * rules.cot_half[k];
                smooth * h + rules.log.weight(i, m) * m1 + cauchy
            })
        } else {
            self.target_derivative_block(kappa, target, source, |g, i| g.tangent[i], |_, _| 0.0)
        };
        Ok(self.block(Family::TangentialSingle, kappa, target, source, matrix))
    }

    /// `TS = |x′|⁻¹ d/dt S` with the spectral derivative on the target curve.
    pub fn tangential_from_single(&self, single: &OperatorBlock) -> OperatorBlock {
        let tgt = self.grids[single.target];
        let diff = &self.rules[single.target].diff;
        let matrix = self.left_derivative(diff, &tgt.speed, &single.matrix);
        self.block(Family::TangentialSingle, single.kappa, single.target, single.source, matrix)
    }

    /// `ND`: integrated by parts on one curve, the smooth kernel between curves.
    pub fn hypersingular(&self, kappa: f64, target: usize, source: usize) -> Result<OperatorBlock> {
        if target != source {
            self.check(kappa, target, source)?;
            let src = self.grids[source];
            let tgt = self.grids[target];
            let h = src.step();
            let matrix = self.fill(target, source, |i, m| {
                let u = tgt.position[i] - src.position[m];
                let r = u.norm();
                let b = bessel01_unchecked(kappa * r);
                let a = tgt.normal[i].dot(u) / r;
                let c = src.normal[m].dot(u) / r;
                let nn = tgt.normal[i].dot(src.normal[m]);
                let radial = kappa * b.h0() * (a * c) + b.h1() * ((nn - 2.0 * a * c) / r);
                0.25 * kappa * I * radial * (src.speed[m] * h)
            });
            return Ok(self.block(Family::Hypersingular, kappa, target, source, matrix));
        }
        let s = self.single_layer(kappa, target, source)?;
        Ok(self.hypersingular_from_single(&s))
    }

    /// `ND = |x′|⁻¹ d/dt S |y′|⁻¹ d/ds + κ² Σ_c n_c(x) S n_c(y)` from a
    /// precomputed single-layer block.
    pub fn hypersingular_from_single(&self, single: &OperatorBlock) -> OperatorBlock {
        let (l, j) = (single.target, single.source);
        let tgt = self.grids[l];
        let src = self.grids[j];
        let s = &single.matrix;
        let rows = tgt.len();
        let cols = src.len();
        let diff_src = &self.rules[j].diff;
        // S |y′|⁻¹ D
        let mut right = CMatrix::zeros(rows, cols);
        {
            let scaled = CMatrix::from_fn(rows, cols, |i, k| s[(i, k)] / src.speed[k]);
            let dsrc = DMatrix::from_fn(cols, cols, |a, b| Complex64::new(diff_src.entry(a, b), 0.0));
            right.gemm(Complex64::new(1.0, 0.0), &scaled, &dsrc, Complex64::new(0.0, 0.0));
        }
        let first = self.left_derivative(&self.rules[l].diff, &tgt.speed, &right);
        let k2 = kappa_sq(single.kappa);
        let matrix = CMatrix::from_fn(rows, cols, |i, k| {
            let nn = tgt.normal[i].dot(src.normal[k]);
            first[(i, k)] + s[(i, k)] * (k2 * nn)
        });
        self.block(Family::Hypersingular, single.kappa, l, j, matrix)
    }

    /// `NS(κ_a) − NS(κ_b)` on one curve, built from the difference kernel.
    ///
    /// The Laplace-type parts of the two kernels cancel, leaving a logarithmic
    /// part with coefficient `(J₁(κ_a r)κ_a − J₁(κ_b r)κ_b)/(4π) (n·(x−y))/r`
    /// and a remainder whose diagonal limit is zero.
    pub fn normal_single_difference(&self, kappa_a: f64, kappa_b: f64, curve: usize) -> Result<OperatorBlock> {
        self.check(kappa_a, curve, curve)?;
        check_kappa(kappa_b)?;
        let g = self.grids[curve];
        let rules = &self.rules[curve];
        let h = g.step();
        let len = g.len();
        let matrix = self.fill(curve, curve, |i, m| {
            if i == m {
                return Complex64::default();
            }
            let d = g.position[i] - g.position[m];
            let r = d.norm();
            let ba = bessel01_unchecked(kappa_a * r);
            let bb = bessel01_unchecked(kappa_b * r);
            let geo = g.normal[i].dot(d) / r * g.speed[m];
            let full = -0.25 * I * (kappa_a * ba.h1() - kappa_b * bb.h1()) * geo;
            let m1 = FRAC_1_4PI * (kappa_a * ba.order1.j - kappa_b * bb.order1.j) * geo;
            let lg = rules.log_sin[(i + len - m) % len];
            (full - m1 * lg) * h + rules.log.weight(i, m) * m1
        });
        Ok(OperatorBlock {
            family: Family::NormalSingle,
            kappa: kappa_a,
            target: curve,
            source: curve,
            matrix,
        })
    }

    /// Kernels `−(iκ/4) H₁(κr) (v(x)·(x−y))/r` for a target-side direction `v`.
    /// `diag` is the diagonal limit of the smooth part, already divided by 4π.
    fn target_derivative_block<V, G>(&self, kappa: f64, target: usize, source: usize, dir: V, diag: G) -> CMatrix
    where
        V: Fn(&BoundaryGrid, usize) -> Point + Sync + Send,
        G: Fn(&BoundaryGrid, usize) -> f64 + Sync + Send,
    {
        let src = self.grids[source];
        let tgt = self.grids[target];
        let h = src.step();
        if target == source {
            let rules = &self.rules[source];
            let len = src.len();
            self.fill(target, source, |i, m| {
                if i == m {
                    return Complex64::new(FRAC_1_4PI * diag(src, i) * h, 0.0);
                }
                let d = src.position[i] - src.position[m];
                let r = d.norm();
                let b = bessel01_unchecked(kappa * r);
                let geo = dir(src, i).dot(d) / r * src.speed[m];
                let full = -0.25 * kappa * I * b.h1() * geo;
                let m1 = FRAC_1_4PI * kappa * b.order1.j * geo;
                let lg = rules.log_sin[(i + len - m) % len];
                (full - m1 * lg) * h + rules.log.weight(i, m) * m1
            })
        } else {
            self.fill(target, source, |i, m| {
                let d = tgt.position[i] - src.position[m];
                let r = d.norm();
                let b = bessel01_unchecked(kappa * r);
                -0.25 * kappa * I * b.h1() * (dir(tgt, i).dot(d) / r * src.speed[m] * h)
            })
        }
    }

    /// `diag(1/|x′|) · D · A`.
    fn left_derivative(&self, diff: &DiffMatrix, speed: &[f64], a: &CMatrix) -> CMatrix {
        let rows = a.nrows();
        let cols = a.ncols();
        let mut data = vec![Complex64::default(); rows * cols];
        self.exec.for_each_chunk(&mut data, rows, |k, column| {
            let col = a.column(k);
            for (i, v) in column.iter_mut().enumerate() {
                let mut acc = Complex64::default();
                for (p, x) in col.iter().enumerate() {
                    acc += x * diff.entry(i, p);
                }
                *v = acc / speed[i];
            }
        });
        CMatrix::from_vec(rows, cols, data)
    }
}

fn kappa_sq(k: f64) -> f64 {
    k * k
}

/// Layer potential kind for off-boundary evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Potential {
    /// `𝒮f(x) = ∫ Φ(x, y) f(y) ds(y)`
    Single,
    /// `𝒟f(x) = ∫ ∂Φ/∂n(y) f(y) ds(y)`
    Double,
}

/// Trapezoid weights of the single and double layer potential kernels at one
/// target point: `(s_m, d_m)` such that `𝒮f(x) ≈ Σ s_m f_m`, `𝒟f(x) ≈ Σ d_m f_m`.
pub fn potential_weights(source: &BoundaryGrid, kappa: f64, x: Point) -> Vec<(Complex64, Complex64)> {
    let h = source.step();
    (0..source.len())
        .map(|m| {
            let d = x - source.position[m];
            let r = d.norm();
            let b = bessel01_unchecked(kappa * r);
            let w = source.speed[m] * h;
            let s = QUARTER_I * b.h0() * w;
            let dl = 0.25 * kappa * I * b.h1() * (source.normal[m].dot(d) / r * w);
            (s, dl)
        })
        .collect()
}

/// Evaluates a layer potential at points away from the source curve.
///
/// Fails with [`Error::MaskedTarget`] for any target closer than `clearance`
/// to the curve.
pub fn potential_eval(
    kind: Potential,
    source: &BoundaryGrid,
    kappa: f64,
    density: &[Complex64],
    targets: &[Point],
    clearance: f64,
    exec: Exec,
) -> Result<Vec<Complex64>> {
    check_kappa(kappa)?;
    if density.len() != source.len() {
        return Err(Error::Argument(format!(
            "density has {} samples, grid has {} nodes",
            density.len(),
            source.len()
        )));
    }
    for p in targets {
        let distance = source.curve().distance(*p);
        if !(distance > clearance) {
            return Err(Error::MaskedTarget { distance, clearance });
        }
    }
    Ok(exec.map(targets.len(), |t| {
        potential_weights(source, kappa, targets[t])
            .iter()
            .zip(density)
            .map(|((s, d), f)| match kind {
                Potential::Single => s * f,
                Potential::Double => d * f,
            })
            .sum()
    }))
}
