//! Scenes shared by the integration tests.
#![allow(dead_code)]

use obscat::fields::Sources;
use obscat::geometry::{Curve, CurveShape, Point, RadialFunction};
use obscat::system::{Impedance, Scene};
use std::f64::consts::PI;

pub fn example1() -> Scene {
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

pub fn sources1() -> Sources {
    Sources::new(
        Point::new(-0.1, 0.35),
        Point::new(0.1, 0.3),
        Point::new(-0.3, 0.55),
        Point::new(0.15, 0.6),
    )
}

/// The apple curve scaled by 0.4 so that it fits inside the peanut.
pub fn small_apple(offset: Point) -> Curve {
    Curve::radial(
        RadialFunction::Apple {
            a: 0.18,
            b: 0.12,
            c: -0.04,
            d: 0.7,
        },
        offset,
    )
    .unwrap()
}

pub fn example2() -> Scene {
    Scene {
        omega: 2.0,
        theta: PI / 4.0,
        phi: 0.0,
        eps0: 2.0,
        mu0: 1.0,
        eps1: 4.0,
        mu1: 2.0,
        impedance: Impedance::ReciprocalCosine {
            offset: 1.0,
            amplitude: 0.2,
        },
        outer: Curve::peanut(),
        inner: small_apple(Point::new(-0.25, 0.05)),
    }
}

pub fn sources2() -> Sources {
    Sources::new(
        Point::new(0.2, 0.2),
        Point::new(-0.5, -0.2),
        Point::new(0.4, 0.55),
        Point::new(-0.3, -0.6),
    )
}

/// Circle around a kite symmetric under `y → −y`, lit along the x axis.
pub fn mirror_symmetric() -> Scene {
    let kite = Curve::new(CurveShape::Kite {
        a: 0.2,
        b: 0.1,
        c: 0.2,
        center: Point::new(-0.2, 0.0),
    })
    .unwrap();
    Scene {
        omega: 3.0,
        theta: PI / 4.0,
        phi: 0.0,
        inner: kite,
        ..example1()
    }
}
