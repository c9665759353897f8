//! Bessel functions of the first and second kind of orders 0 and 1 for real
//! positive arguments, and the Hankel functions built from them.
//!
//! Three evaluation regimes are used:
//!
//! * `x <= 3`: ascending power series,
//! * `3 < x < 25`: Miller's backward recurrence normalised by
//!   `J0 + 2 sum J_2k = 1`, with `Y0`, `Y1` from their Neumann series,
//! * `x >= 25`: Hankel's asymptotic expansion.
//!
//! The logarithmic decomposition `Y0(x) = (2/pi) ln(x/2) J0(x) + R0(x)` and
//! `Y1(x) = (2/pi) ln(x/2) J1(x) - 2/(pi x) + R1(x)` is exposed through
//! [`y0_regular`] and [`y1_regular`]; kernel splitting relies on it.

use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_2_PI, PI};

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Upper end of the power-series regime.
pub const SERIES_MAX: f64 = 3.0;
/// Lower end of the asymptotic regime.
pub const ASYMPTOTIC_MIN: f64 = 25.0;

/// Regular (`j`) and singular (`y`) solution of Bessel's equation of one order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselPair {
    pub j: f64,
    pub y: f64,
}

impl BesselPair {
    /// `H = J + iY`.
    pub fn hankel(&self) -> Complex64 {
        Complex64::new(self.j, self.y)
    }
}

/// `J0, Y0, J1, Y1` evaluated at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bessel01 {
    pub order0: BesselPair,
    pub order1: BesselPair,
}

impl Bessel01 {
    pub fn h0(&self) -> Complex64 {
        self.order0.hankel()
    }

    pub fn h1(&self) -> Complex64 {
        self.order1.hankel()
    }
}

fn check_nonnegative(x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "Bessel J needs a finite non-negative argument, got {x}"
        )));
    }
    Ok(())
}

fn check_positive(x: f64) -> Result<()> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "Bessel Y and Hankel functions need a finite positive argument, got {x}"
        )));
    }
    Ok(())
}

pub fn bessel_j0(x: f64) -> Result<f64> {
    check_nonnegative(x)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(bessel01_unchecked(x).order0.j)
}

pub fn bessel_j1(x: f64) -> Result<f64> {
    check_nonnegative(x)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(bessel01_unchecked(x).order1.j)
}

pub fn bessel_y0(x: f64) -> Result<f64> {
    check_positive(x)?;
    Ok(bessel01_unchecked(x).order0.y)
}

pub fn bessel_y1(x: f64) -> Result<f64> {
    check_positive(x)?;
    Ok(bessel01_unchecked(x).order1.y)
}

pub fn hankel1_0(x: f64) -> Result<Complex64> {
    check_positive(x)?;
    Ok(bessel01_unchecked(x).h0())
}

pub fn hankel1_1(x: f64) -> Result<Complex64> {
    check_positive(x)?;
    Ok(bessel01_unchecked(x).h1())
}

/// All four functions at once, for `x > 0`.
pub fn bessel01(x: f64) -> Result<Bessel01> {
    check_positive(x)?;
    Ok(bessel01_unchecked(x))
}

/// `Y0(x) - (2/pi) ln(x/2) J0(x)`, an entire function of `x^2`.
pub fn y0_regular(x: f64) -> Result<f64> {
    check_nonnegative(x)?;
    if x <= SERIES_MAX {
        return Ok(series_small(x).y0_regular);
    }
    let b = bessel01_unchecked(x);
    Ok(b.order0.y - FRAC_2_PI * (0.5 * x).ln() * b.order0.j)
}

/// `Y1(x) - (2/pi) ln(x/2) J1(x) + 2/(pi x)`, which vanishes at the origin.
pub fn y1_regular(x: f64) -> Result<f64> {
    check_nonnegative(x)?;
    if x <= SERIES_MAX {
        return Ok(series_small(x).y1_regular);
    }
    let b = bessel01_unchecked(x);
    Ok(b.order1.y - FRAC_2_PI * (0.5 * x).ln() * b.order1.j + FRAC_2_PI / x)
}

/// Evaluates `J0, Y0, J1, Y1`. The caller guarantees `x > 0` and finite.
#[inline]
pub(crate) fn bessel01_unchecked(x: f64) -> Bessel01 {
    debug_assert!(x > 0.0 && x.is_finite());
    if x <= SERIES_MAX {
        let s = series_small(x);
        let log_half = (0.5 * x).ln();
        Bessel01 {
            order0: BesselPair {
                j: s.j0,
                y: FRAC_2_PI * log_half * s.j0 + s.y0_regular,
            },
            order1: BesselPair {
                j: s.j1,
                y: FRAC_2_PI * log_half * s.j1 - FRAC_2_PI / x + s.y1_regular,
            },
        }
    } else if x < ASYMPTOTIC_MIN {
        miller(x)
    } else {
        asymptotic(x)
    }
}

struct SmallSeries {
    j0: f64,
    j1: f64,
    y0_regular: f64,
    y1_regular: f64,
}

fn series_small(x: f64) -> SmallSeries {
    let q = 0.25 * x * x;
    // term0_k = (-q)^k / (k!)^2, term1_k = (-q)^k / (k! (k+1)!)
    let mut term0 = 1.0;
    let mut term1 = 1.0;
    let mut harmonic = 0.0; // H_k
    let mut j0 = 1.0;
    let mut j1 = 1.0;
    let mut r0 = 0.0;
    // psi(k+1) + psi(k+2) = H_k + H_{k+1} - 2 gamma
    let mut r1 = 1.0 - 2.0 * EULER_GAMMA;
    for k in 1..60 {
        let kf = k as f64;
        term0 *= -q / (kf * kf);
        term1 *= -q / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        j0 += term0;
        j1 += term1;
        r0 -= harmonic * term0;
        r1 += (2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA) * term1;
        if term0.abs() < 1e-18 && term1.abs() < 1e-18 {
            break;
        }
    }
    SmallSeries {
        j0,
        j1: 0.5 * x * j1,
        y0_regular: FRAC_2_PI * (EULER_GAMMA * j0 + r0),
        y1_regular: -0.5 * x * r1 / PI,
    }
}

const MILLER_CAP: usize = 96;

fn miller(x: f64) -> Bessel01 {
    // Start order well above x so that J_N(x) is negligible.
    let mut top = (1.2 * x + 30.0) as usize;
    top += top % 2;
    debug_assert!(top + 2 <= MILLER_CAP);

    let mut b = [0.0_f64; MILLER_CAP];
    b[top] = 1e-30;
    let two_over_x = 2.0 / x;
    for k in (1..=top).rev() {
        b[k - 1] = (k as f64) * two_over_x * b[k] - b[k + 1];
        if b[k - 1].abs() > 1e250 {
            for v in b[k - 1..=top + 1].iter_mut() {
                *v *= 1e-250;
            }
        }
    }

    let mut norm = b[0];
    let mut neumann0 = 0.0;
    let mut neumann1 = 0.0;
    let mut sign = -1.0;
    let mut k = 1;
    while 2 * k <= top {
        let kf = k as f64;
        norm += 2.0 * b[2 * k];
        neumann0 += sign * b[2 * k] / kf;
        neumann1 += sign * (b[2 * k - 1] - b[2 * k + 1]) / kf;
        sign = -sign;
        k += 1;
    }
    let j0 = b[0] / norm;
    let j1 = b[1] / norm;
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    let y0 = FRAC_2_PI * (log_term * j0 - 2.0 * neumann0 / norm);
    let y1 = FRAC_2_PI * (log_term * j1 - j0 / x + neumann1 / norm);
    Bessel01 {
        order0: BesselPair { j: j0, y: y0 },
        order1: BesselPair { j: j1, y: y1 },
    }
}

/// Hankel's expansion: returns `(P, Q)` for order `nu`.
fn asymptotic_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0; // a_k(nu) / x^k
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a *= (mu - odd * odd) / (8.0 * kf * x);
        let mag = a.abs();
        if mag > last {
            break;
        }
        last = mag;
        // signs: P = a0 - a2 + a4 - ..., Q = a1 - a3 + ...
        match k % 4 {
            0 => p += a,
            1 => q += a,
            2 => p -= a,
            _ => q -= a,
        }
        if mag < 1e-18 {
            break;
        }
    }
    (p, q)
}

fn asymptotic(x: f64) -> Bessel01 {
    let amp = (FRAC_2_PI / x).sqrt();
    let (s, c) = x.sin_cos();
    // chi0 = x - pi/4, chi1 = x - 3 pi/4
    let cos0 = (c + s) * FRAC_1_SQRT_2;
    let sin0 = (s - c) * FRAC_1_SQRT_2;
    let cos1 = (s - c) * FRAC_1_SQRT_2;
    let sin1 = -(s + c) * FRAC_1_SQRT_2;
    let (p0, q0) = asymptotic_pq(0.0, x);
    let (p1, q1) = asymptotic_pq(1.0, x);
    Bessel01 {
        order0: BesselPair {
            j: amp * (p0 * cos0 - q0 * sin0),
            y: amp * (p0 * sin0 + q0 * cos0),
        },
        order1: BesselPair {
            j: amp * (p1 * cos1 - q1 * sin1),
            y: amp * (p1 * sin1 + q1 * cos1),
        },
    }
}
