//! Closed (elliptical) two-body orbit with Keplerian propagation.

use std::f64::consts::{PI, TAU};

use crate::body::CentralBody;
use crate::kepler::{
    eccentric_from_true, mean_from_eccentric, normalize_angle, solve_kepler_elliptic,
    true_from_eccentric,
};

/// Eccentricities below this are collapsed to exactly zero so that circular
/// orbits keep a stable (if arbitrary) argument of periapsis.
pub const CIRCULAR_ECCENTRICITY_EPSILON: f64 = 1e-9;

/// A bound Keplerian orbit. Angles are in radians, lengths in metres,
/// times in seconds of universal time.
#[derive(Clone, Debug)]
pub struct KeplerOrbit {
    pub body: CentralBody,
    pub semi_major_axis: f64,
    pub eccentricity: f64,
    pub inclination: f64,
    pub longitude_of_ascending_node: f64,
    pub argument_of_periapsis: f64,
    /// Mean anomaly at `epoch`.
    pub mean_anomaly_epoch: f64,
    /// Universal time the mean anomaly is referenced to.
    pub epoch: f64,
}

/// Instantaneous scalar state of the vessel on its orbit.
#[derive(Clone, Copy, Debug)]
pub struct OrbitalState {
    pub true_anomaly: f64,
    pub radius: f64,
    pub speed: f64,
    /// Component of velocity along the radius vector (positive outward).
    pub radial_speed: f64,
    /// Component of velocity perpendicular to the radius vector, in-plane.
    pub horizontal_speed: f64,
}

impl KeplerOrbit {
    /// Circular orbit at the given altitude above the body surface.
    #[allow(clippy::too_many_arguments)]
    pub fn circular(
        body: CentralBody,
        altitude: f64,
        inclination: f64,
        longitude_of_ascending_node: f64,
        argument_of_periapsis: f64,
        mean_anomaly_epoch: f64,
        epoch: f64,
    ) -> Self {
        KeplerOrbit {
            body,
            semi_major_axis: altitude,
            eccentricity: 0.0,
            inclination,
            longitude_of_ascending_node,
            argument_of_periapsis,
            mean_anomaly_epoch,
            epoch,
        }
        .with_altitude_semi_major()
    }

    fn with_altitude_semi_major(mut self) -> Self {
        self.semi_major_axis += self.body.radius;
        self
    }

    /// Orbit from apoapsis and periapsis altitudes (above the surface).
    #[allow(clippy::too_many_arguments)]
    pub fn from_apsides(
        body: CentralBody,
        apoapsis_altitude: f64,
        periapsis_altitude: f64,
        inclination: f64,
        longitude_of_ascending_node: f64,
        argument_of_periapsis: f64,
        mean_anomaly_epoch: f64,
        epoch: f64,
    ) -> Self {
        let r_apo = body.radius + apoapsis_altitude;
        let r_peri = body.radius + periapsis_altitude;
        let semi_major_axis = 0.5 * (r_apo + r_peri);
        let mut eccentricity = (r_apo - r_peri) / (r_apo + r_peri);
        if eccentricity.abs() < CIRCULAR_ECCENTRICITY_EPSILON {
            eccentricity = 0.0;
        }
        KeplerOrbit {
            body,
            semi_major_axis,
            eccentricity,
            inclination,
            longitude_of_ascending_node,
            argument_of_periapsis,
            mean_anomaly_epoch,
            epoch,
        }
    }

    pub fn mean_motion(&self) -> f64 {
        (self.body.mu / self.semi_major_axis.powi(3)).sqrt()
    }

    pub fn period(&self) -> f64 {
        TAU / self.mean_motion()
    }

    pub fn apoapsis_radius(&self) -> f64 {
        self.semi_major_axis * (1.0 + self.eccentricity)
    }

    pub fn periapsis_radius(&self) -> f64 {
        self.semi_major_axis * (1.0 - self.eccentricity)
    }

    pub fn apoapsis_altitude(&self) -> f64 {
        self.apoapsis_radius() - self.body.radius
    }

    pub fn periapsis_altitude(&self) -> f64 {
        self.periapsis_radius() - self.body.radius
    }

    /// Mean anomaly at universal time `ut`, wrapped to [0, 2*pi).
    pub fn mean_anomaly_at(&self, ut: f64) -> f64 {
        normalize_angle(self.mean_anomaly_epoch + self.mean_motion() * (ut - self.epoch))
    }

    /// Orbital radius at a given true anomaly.
    pub fn radius_at_true_anomaly(&self, true_anomaly: f64) -> f64 {
        self.semi_major_axis * (1.0 - self.eccentricity * self.eccentricity)
            / (1.0 + self.eccentricity * true_anomaly.cos())
    }

    /// Speed at a given radius via the vis-viva relation.
    pub fn speed_at_radius(&self, radius: f64) -> f64 {
        (self.body.mu * (2.0 / radius - 1.0 / self.semi_major_axis)).sqrt()
    }

    /// Instantaneous state at universal time `ut`.
    pub fn state_at(&self, ut: f64) -> OrbitalState {
        let mean_anomaly = self.mean_anomaly_at(ut);
        let ecc_anomaly = solve_kepler_elliptic(mean_anomaly, self.eccentricity);
        let true_anomaly = true_from_eccentric(ecc_anomaly, self.eccentricity);
        let radius = self.radius_at_true_anomaly(true_anomaly);
        let speed = self.speed_at_radius(radius);
        // Specific angular momentum h = sqrt(mu * a * (1 - e^2)); the
        // transverse velocity component is h / r and the radial component
        // follows from v^2 = v_r^2 + v_t^2 with sign from the true anomaly.
        let h = (self.body.mu
            * self.semi_major_axis
            * (1.0 - self.eccentricity * self.eccentricity))
            .sqrt();
        let horizontal_speed = h / radius;
        let radial_sq = (speed * speed - horizontal_speed * horizontal_speed).max(0.0);
        let radial_speed = radial_sq.sqrt() * if true_anomaly <= PI { 1.0 } else { -1.0 };
        OrbitalState {
            true_anomaly,
            radius,
            speed,
            radial_speed,
            horizontal_speed,
        }
    }

    /// Seconds from `ut` until the vessel next reaches mean anomaly `target`.
    /// Returns a value in (0, period]; a vessel exactly at the target now is
    /// reported as one full period away, matching the "next" pass semantics.
    pub fn time_to_mean_anomaly(&self, ut: f64, target: f64) -> f64 {
        let current = self.mean_anomaly_at(ut);
        let mut delta = normalize_angle(target - current);
        if delta <= 0.0 {
            delta = TAU;
        }
        delta / self.mean_motion()
    }

    pub fn time_to_periapsis(&self, ut: f64) -> f64 {
        self.time_to_mean_anomaly(ut, 0.0)
    }

    pub fn time_to_apoapsis(&self, ut: f64) -> f64 {
        self.time_to_mean_anomaly(ut, PI)
    }

    /// Convenience pair: seconds to the next apoapsis and periapsis passages.
    pub fn apsis_times(&self, ut: f64) -> (f64, f64) {
        (self.time_to_apoapsis(ut), self.time_to_periapsis(ut))
    }

    /// Seconds from `ut` until the vessel next reaches the given true anomaly.
    pub fn time_to_true_anomaly(&self, ut: f64, true_anomaly: f64) -> f64 {
        let ecc_anomaly = eccentric_from_true(true_anomaly, self.eccentricity);
        let target_mean = mean_from_eccentric(ecc_anomaly, self.eccentricity);
        self.time_to_mean_anomaly(ut, target_mean)
    }

    /// Argument of latitude (angle from the ascending node) at time `ut`.
    pub fn argument_of_latitude_at(&self, ut: f64) -> f64 {
        let state = self.state_at(ut);
        normalize_angle(self.argument_of_periapsis + state.true_anomaly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{CentralBody, REFERENCE_ALTITUDE};

    fn reference_orbit() -> KeplerOrbit {
        KeplerOrbit::circular(
            CentralBody::enceladus(),
            REFERENCE_ALTITUDE,
            0.0,
            4.728282181168396,
            2.1078335189068,
            5.730634126227086,
            2_966_700_547.0,
        )
    }

    #[test]
    fn circular_speed_matches_reference() {
        let orbit = reference_orbit();
        let state = orbit.state_at(2_966_700_600.0);
        assert!((state.speed - 134.49740511030674).abs() < 1e-9);
        assert!(state.radial_speed.abs() < 1e-9);
    }

    #[test]
    fn apsis_times_sum_to_half_period() {
        let orbit = reference_orbit();
        let ut = 2_966_700_600.0;
        let tta = orbit.time_to_apoapsis(ut);
        let ttp = orbit.time_to_periapsis(ut);
        let half = orbit.period() / 2.0;
        assert!(((tta - ttp).abs() - half).abs() < 1e-6);
    }
}
