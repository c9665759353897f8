//! Slow reference implementations shared by the integration tests.
//!
//! Bessel functions come from power series summed in double-double
//! arithmetic for `x ≤ 30` and from the Hankel asymptotic expansion beyond.
//! `j_integral` is a third, quadrature-based route for `J_n`.
#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Clone, Copy, Debug)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

impl Dd {
    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn add(self, o: Dd) -> Dd {
        let (s, mut e) = two_sum(self.hi, o.hi);
        e += self.lo + o.lo;
        quick_two_sum(s, e)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let mut e = self.hi.mul_add(o.hi, -p);
        e += self.hi * o.lo + self.lo * o.hi;
        quick_two_sum(p, e)
    }

    fn div_f(self, d: f64) -> Dd {
        let q = self.hi / d;
        let p = q * d;
        let e = q.mul_add(d, -p);
        let r = (self.hi - p - e + self.lo) / d;
        quick_two_sum(q, r)
    }

    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// `(J₀, J₁, Y₀, Y₁)` by series; accurate for `0 < x ≤ 30`.
fn series(x: f64) -> [f64; 4] {
    let half = Dd::new(x).div_f(2.0);
    let q = half.mul(half).neg();
    let mut t = Dd::new(1.0); // (−1)^k (x/2)^{2k} / (k!)²
    let mut u = half; // (−1)^k (x/2)^{2k+1} / (k!(k+1)!)
    let mut j0 = t;
    let mut j1 = u;
    let mut harmonic = Dd::new(0.0); // H_k
    let mut y0_sum = Dd::new(0.0); // Σ t_k H_k
    let mut y1_sum = u; // Σ u_k (H_k + H_{k+1}), k = 0 term is u_0
    for k in 1..200 {
        let kf = k as f64;
        t = t.mul(q).div_f(kf * kf);
        u = u.mul(q).div_f(kf * (kf + 1.0));
        let next = harmonic.add(Dd::new(1.0).div_f(kf));
        let after = next.add(Dd::new(1.0).div_f(kf + 1.0));
        harmonic = next;
        j0 = j0.add(t);
        j1 = j1.add(u);
        y0_sum = y0_sum.add(t.mul(harmonic));
        y1_sum = y1_sum.add(u.mul(harmonic.add(after)));
        if t.hi.abs() < 1e-40 && u.hi.abs() < 1e-40 && k > 5 {
            break;
        }
    }
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let j0v = j0.value();
    let j1v = j1.value();
    let y0 = 2.0 / PI * (log_term * j0v - y0_sum.value());
    let y1 = -2.0 / (PI * x) + 2.0 / PI * log_term * j1v - y1_sum.value() / PI;
    [j0v, j1v, y0, y1]
}

/// Hankel asymptotic expansion for order `nu ∈ {0, 1}`, returns `(J, Y)`.
fn asymptotic(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..200usize {
        let term = a / x.powi(k as i32);
        if term.abs() > prev || term.abs() < 1e-20 {
            break;
        }
        prev = term.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        let odd = (2 * k + 1) as f64;
        a *= (mu - odd * odd) / ((k + 1) as f64 * 8.0);
    }
    let chi = x - nu * FRAC_PI_2 - FRAC_PI_4;
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p * chi.cos() - q * chi.sin()), amp * (p * chi.sin() + q * chi.cos()))
}

/// Reference `(J₀, J₁, Y₀, Y₁)` for `x > 0`.
pub fn bessel(x: f64) -> [f64; 4] {
    if x <= 30.0 {
        series(x)
    } else {
        let (j0, y0) = asymptotic(0.0, x);
        let (j1, y1) = asymptotic(1.0, x);
        [j0, j1, y0, y1]
    }
}

/// `J_n(x) = (1/π) ∫₀^π cos(nτ − x sin τ) dτ` by the periodic trapezoid rule.
pub fn j_integral(n: i32, x: f64) -> f64 {
    let m = 512;
    let h = 2.0 * PI / m as f64;
    let s: f64 = (0..m)
        .map(|k| {
            let tau = k as f64 * h;
            (n as f64 * tau - x * tau.sin()).cos()
        })
        .sum();
    s * h / (2.0 * PI)
}

pub fn hankel0(x: f64) -> Complex64 {
    let b = bessel(x);
    Complex64::new(b[0], b[2])
}

pub fn hankel1(x: f64) -> Complex64 {
    let b = bessel(x);
    Complex64::new(b[1], b[3])
}

/// `(J_m, J_m′, H_m, H_m′)` for `m ∈ {0, 1}`.
pub fn order_with_derivative(m: u32, x: f64) -> (f64, f64, Complex64, Complex64) {
    let b = bessel(x);
    let h0 = Complex64::new(b[0], b[2]);
    let h1 = Complex64::new(b[1], b[3]);
    match m {
        0 => (b[0], -b[1], h0, -h1),
        1 => (b[1], b[0] - b[1] / x, h1, h0 - h1 / x),
        _ => panic!("orders 0 and 1 only"),
    }
}

/// Eigenvalues of the boundary operators on a circle of radius `a` for the
/// density `e^{imt}`.
pub mod circle {
    use super::*;

    pub fn single(m: u32, kappa: f64, a: f64) -> Complex64 {
        let (j, _, h, _) = order_with_derivative(m, kappa * a);
        Complex64::new(0.0, PI * a / 2.0) * j * h
    }

    pub fn double(m: u32, kappa: f64, a: f64) -> Complex64 {
        let (j, jp, h, hp) = order_with_derivative(m, kappa * a);
        Complex64::new(0.0, PI * kappa * a / 4.0) * (j * hp + jp * h)
    }

    pub fn normal_single(m: u32, kappa: f64, a: f64) -> Complex64 {
        double(m, kappa, a)
    }

    pub fn hypersingular(m: u32, kappa: f64, a: f64) -> Complex64 {
        let (_, jp, _, hp) = order_with_derivative(m, kappa * a);
        Complex64::new(0.0, PI * kappa * kappa * a / 2.0) * jp * hp
    }

    pub fn tangential_single(m: u32, kappa: f64, a: f64) -> Complex64 {
        Complex64::new(0.0, m as f64 / a) * single(m, kappa, a)
    }
}

/// `(i/4) H₀⁽¹⁾(κ|x − y|)`.
pub fn fundamental(kappa: f64, x: [f64; 2], y: [f64; 2]) -> Complex64 {
    let r = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt();
    Complex64::new(0.0, 0.25) * hankel0(kappa * r)
}

/// `∂²Φ/∂n(x)∂n(y)` for `x ≠ y`.
pub fn hypersingular_kernel(kappa: f64, x: [f64; 2], nx: [f64; 2], y: [f64; 2], ny: [f64; 2]) -> Complex64 {
    let u = [x[0] - y[0], x[1] - y[1]];
    let r = (u[0] * u[0] + u[1] * u[1]).sqrt();
    let a = nx[0] * u[0] + nx[1] * u[1];
    let b = ny[0] * u[0] + ny[1] * u[1];
    let c = nx[0] * ny[0] + nx[1] * ny[1];
    let h0 = hankel0(kappa * r);
    let h1 = hankel1(kappa * r);
    Complex64::new(0.0, kappa / 4.0)
        * (kappa * h0 * (a * b / (r * r)) - 2.0 * h1 * (a * b / (r * r * r)) + h1 * (c / r))
}

/// Far field of `H₀⁽¹⁾(κ|x − z|)` in direction `(cos t, sin t)`.
pub fn point_source_farfield(kappa: f64, z: [f64; 2], t: f64) -> Complex64 {
    let phase = Complex64::from_polar(1.0, FRAC_PI_4);
    let dot = t.cos() * z[0] + t.sin() * z[1];
    Complex64::new(0.0, -4.0) * phase / (8.0 * PI * kappa).sqrt() * Complex64::from_polar(1.0, -kappa * dot)
}
