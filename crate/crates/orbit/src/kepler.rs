//! Kepler equation solver and anomaly conversions for elliptical orbits.

use std::f64::consts::{PI, TAU};

/// Wrap an angle into [0, 2*pi).
pub fn normalize_angle(theta: f64) -> f64 {
    let wrapped = theta.rem_euclid(TAU);
    if wrapped >= TAU {
        0.0
    } else {
        wrapped
    }
}

/// The Kepler solver only covers closed (elliptical) orbits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnsupportedOrbit;

impl std::fmt::Display for UnsupportedOrbit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "eccentricity must be below 1 for a closed orbit")
    }
}

impl std::error::Error for UnsupportedOrbit {}

/// Solve E - e*sin(E) = M for the eccentric anomaly E.
///
/// Newton iteration seeded at M (or pi for high eccentricity), falling back to
/// bisection on [0, 2*pi] if Newton stalls or leaves the bracket.
pub fn solve_kepler(mean_anomaly: f64, eccentricity: f64) -> Result<f64, UnsupportedOrbit> {
    if !(0.0..1.0).contains(&eccentricity) {
        return Err(UnsupportedOrbit);
    }
    Ok(solve_kepler_elliptic(mean_anomaly, eccentricity))
}

/// Infallible solver for eccentricities already known to be in [0, 1).
pub(crate) fn solve_kepler_elliptic(mean_anomaly: f64, eccentricity: f64) -> f64 {
    let m = normalize_angle(mean_anomaly);
    let e = eccentricity;

    let f = |ecc_anomaly: f64| ecc_anomaly - e * ecc_anomaly.sin() - m;

    let mut guess = if e > 0.8 { PI } else { m };
    for _ in 0..64 {
        let residual = f(guess);
        if residual.abs() < 1e-14 {
            return guess;
        }
        let derivative = 1.0 - e * guess.cos();
        let next = guess - residual / derivative;
        if !next.is_finite() || !(-TAU..=2.0 * TAU).contains(&next) {
            break;
        }
        if (next - guess).abs() < 1e-15 {
            return next;
        }
        guess = next;
    }

    bisect_kepler(m, e)
}

fn bisect_kepler(m: f64, e: f64) -> f64 {
    let f = |ecc_anomaly: f64| ecc_anomaly - e * ecc_anomaly.sin() - m;
    let mut lo = 0.0_f64;
    let mut hi = TAU;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// True anomaly from eccentric anomaly.
pub fn true_from_eccentric(ecc_anomaly: f64, e: f64) -> f64 {
    let half = 0.5 * ecc_anomaly;
    normalize_angle(2.0 * ((1.0 + e).sqrt() * half.sin()).atan2((1.0 - e).sqrt() * half.cos()))
}

/// Eccentric anomaly from true anomaly.
pub fn eccentric_from_true(true_anomaly: f64, e: f64) -> f64 {
    let half = 0.5 * true_anomaly;
    normalize_angle(2.0 * ((1.0 - e).sqrt() * half.sin()).atan2((1.0 + e).sqrt() * half.cos()))
}

/// Mean anomaly from eccentric anomaly.
pub fn mean_from_eccentric(ecc_anomaly: f64, e: f64) -> f64 {
    normalize_angle(ecc_anomaly - e * ecc_anomaly.sin())
}
