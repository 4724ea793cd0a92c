/// Gravitating central body for two-body propagation.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralBody {
    pub name: String,
    /// Gravitational parameter in m^3/s^2.
    pub mu: f64,
    /// Mean body radius in m; altitudes are measured from here.
    pub radius: f64,
    /// Minimum altitude in m that maneuver planning is allowed to target.
    pub safe_altitude: f64,
}

pub const ENCELADUS_RADIUS: f64 = 252_100.0;

/// Altitude of the reference circular orbit the gravitational parameter is fitted to.
pub const REFERENCE_ALTITUDE: f64 = 146_553.0016;

/// Circular speed of the reference orbit.
pub const REFERENCE_SPEED: f64 = 134.49740511030674;

/// Fitted as v^2 * r for the reference circular orbit.
pub const ENCELADUS_MU: f64 = REFERENCE_SPEED * REFERENCE_SPEED * (ENCELADUS_RADIUS + REFERENCE_ALTITUDE);

pub const ENCELADUS_SAFE_ALTITUDE: f64 = 50_000.0;

impl CentralBody {
    pub fn enceladus() -> Self {
        CentralBody {
            name: "Enceladus".to_string(),
            mu: ENCELADUS_MU,
            radius: ENCELADUS_RADIUS,
            safe_altitude: ENCELADUS_SAFE_ALTITUDE,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fitted_mu_magnitude() {
        assert!((ENCELADUS_MU - 7.211454194986715e9).abs() / ENCELADUS_MU < 1e-12);
    }
}
