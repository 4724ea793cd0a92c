//! Impulsive maneuver nodes.

use crate::orbit::KeplerOrbit;

/// A planned impulsive burn, expressed in the local orbital frame at the
/// burn instant: prograde (along velocity), normal (along the orbit normal),
/// radial (outward along the radius vector). Magnitudes in m/s.
#[derive(Clone, Debug)]
pub struct ManeuverNode {
    pub prograde: f64,
    pub normal: f64,
    pub radial: f64,
    /// Universal time of the burn.
    pub ut: f64,
    /// Orbit the vessel will be on after executing the burn exactly.
    pub predicted: KeplerOrbit,
}

impl ManeuverNode {
    /// Total impulse magnitude of the burn.
    pub fn delta_v(&self) -> f64 {
        (self.prograde * self.prograde + self.normal * self.normal + self.radial * self.radial)
            .sqrt()
    }
}
