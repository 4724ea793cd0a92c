//! The LLMSat-1 vessel fixture: mass and propellant model, parts tree,
//! science payload, and the parking orbit every scenario starts from.

use llmsat_orbit::{CentralBody, KeplerOrbit};
use serde::Serialize;

/// Main engine parameters.
#[derive(Clone, Debug)]
pub struct Engine {
    /// Maximum thrust in N.
    pub thrust: f64,
    /// Specific impulse in seconds.
    pub isp: f64,
    /// Standard gravity used to convert Isp to exhaust velocity, m/s^2.
    pub g0: f64,
}

impl Engine {
    /// Effective exhaust velocity in m/s.
    pub fn exhaust_velocity(&self) -> f64 {
        self.isp * self.g0
    }
}

/// A single resource tank. Quantities are in the resource's native volume
/// units; `density` converts to kilograms (zero for massless bookkeeping
/// resources like electric charge).
#[derive(Clone, Debug)]
pub struct ResourceTank {
    pub name: String,
    pub amount: f64,
    pub max: f64,
    pub density: f64,
}

/// Science payload descriptor, rendered verbatim by `get_experiments`.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentDef {
    pub part: String,
    pub name: String,
    pub deployed: bool,
    pub rerunnable: bool,
    pub inoperable: bool,
    pub has_data: bool,
    pub available: bool,
}

/// One execution of an experiment, kept in the session journal.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRecord {
    pub timestamp: String,
    pub value: String,
    pub altitude: f64,
    pub body: String,
    /// Orbit inclination at measurement time, for mission evaluators;
    /// not part of the console's result document.
    #[serde(skip)]
    pub inclination_degrees: f64,
}

/// Attempting to burn more delta-v than the remaining propellant supports.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InsufficientPropellant {
    pub required: f64,
    pub available: f64,
}

/// Volume of NTO consumed per volume of UDMH; the engine's fixed mixture
/// setting, derived from consecutive tank readings around a known burn.
pub const NTO_PER_UDMH: f64 = 1.06475921879359;

pub const UDMH_DENSITY: f64 = 0.791;
pub const NTO_DENSITY: f64 = 1.433;

/// Electric charge drained per second of simulated time.
pub const ELECTRIC_DRAIN_PER_SECOND: f64 = 0.2;

/// Spacecraft state: fixed fixture data plus the mutable orbit and tanks.
#[derive(Clone, Debug)]
pub struct Vessel {
    pub name: String,
    pub situation: String,
    pub dry_mass: f64,
    pub engine: Engine,
    pub moment_of_inertia: [f64; 3],
    pub tanks: Vec<ResourceTank>,
    pub experiments: Vec<ExperimentDef>,
    pub parts_tree: serde_json::Value,
    pub orbit: KeplerOrbit,
}

/// Parking orbit all scenarios start from: circular at 146,553 m over
/// Enceladus, equatorial, phased to match the reference mission timeline.
pub fn initial_orbit(epoch: f64) -> KeplerOrbit {
    KeplerOrbit::circular(
        CentralBody::enceladus(),
        146_553.0016,
        0.0,
        270.894468106344_f64.to_radians(),
        120.76989683110502_f64.to_radians(),
        5.730634126227086,
        epoch,
    )
}

impl Vessel {
    /// The LLMSat-1 flight article with full tanks on its parking orbit.
    pub fn llmsat1(epoch: f64) -> Self {
        let parts_tree: serde_json::Value =
            serde_json::from_str(include_str!("../fixtures/parts_tree.json"))
                .expect("parts tree fixture is valid JSON");
        Vessel {
            name: "LLMSat-1".to_string(),
            situation: "orbiting".to_string(),
            dry_mass: 1369.1041259765625,
            engine: Engine {
                thrust: 18_890.0,
                isp: 314.0,
                g0: 9.80665,
            },
            moment_of_inertia: [4571.46337890625, 2023.68359375, 4550.47998046875],
            tanks: vec![
                ResourceTank {
                    name: "UDMH".into(),
                    amount: 1247.939819,
                    max: 1247.939819,
                    density: UDMH_DENSITY,
                },
                ResourceTank {
                    name: "NTO".into(),
                    amount: 1329.383301,
                    max: 1329.383301,
                    density: NTO_DENSITY,
                },
                ResourceTank {
                    name: "ElectricCharge".into(),
                    amount: 93_500.0,
                    max: 93_500.0,
                    density: 0.0,
                },
                ResourceTank {
                    name: "Ore".into(),
                    amount: 0.0,
                    max: 7.9,
                    density: 0.0,
                },
            ],
            experiments: vec![ExperimentDef {
                part: "2HOT Thermometer".into(),
                name: "Temperature Scan".into(),
                deployed: false,
                rerunnable: true,
                inoperable: false,
                has_data: false,
                available: true,
            }],
            parts_tree,
            orbit: initial_orbit(epoch),
        }
    }

    pub fn tank(&self, name: &str) -> &ResourceTank {
        self.tanks
            .iter()
            .find(|t| t.name == name)
            .expect("known resource name")
    }

    fn tank_mut(&mut self, name: &str) -> &mut ResourceTank {
        self.tanks
            .iter_mut()
            .find(|t| t.name == name)
            .expect("known resource name")
    }

    /// Current wet mass in kg.
    pub fn total_mass(&self) -> f64 {
        self.dry_mass
            + self
                .tanks
                .iter()
                .map(|t| t.amount * t.density)
                .sum::<f64>()
    }

    /// Delta-v remaining if every drop of propellant were burned.
    pub fn max_delta_v(&self) -> f64 {
        self.engine.exhaust_velocity() * (self.total_mass() / self.dry_mass).ln()
    }

    /// Drain electric charge for elapsed mission time; bookkeeping only,
    /// never a failure source.
    pub fn drain_electric_charge(&mut self, met_seconds: f64) {
        let tank = self.tank_mut("ElectricCharge");
        tank.amount = (tank.max - ELECTRIC_DRAIN_PER_SECOND * met_seconds.max(0.0)).max(0.0);
    }

    /// Consume propellant for an impulsive burn of `delta_v` m/s, splitting
    /// the expelled mass between the two propellants at the engine's fixed
    /// volumetric mixture.
    pub fn burn_consume(&mut self, delta_v: f64) -> Result<(), InsufficientPropellant> {
        assert!(delta_v >= 0.0, "burns consume a non-negative delta-v");
        let available = self.max_delta_v();
        if delta_v > available {
            return Err(InsufficientPropellant {
                required: delta_v,
                available,
            });
        }
        let ve = self.engine.exhaust_velocity();
        let expelled = self.total_mass() * (1.0 - (-delta_v / ve).exp());
        let udmh_volume = expelled / (UDMH_DENSITY + NTO_DENSITY * NTO_PER_UDMH);
        let nto_volume = udmh_volume * NTO_PER_UDMH;
        let udmh = self.tank_mut("UDMH");
        udmh.amount = (udmh.amount - udmh_volume).max(0.0);
        let nto = self.tank_mut("NTO");
        nto.amount = (nto.amount - nto_volume).max(0.0);
        Ok(())
    }

    pub fn experiment(&self, name: &str) -> Option<&ExperimentDef> {
        self.experiments.iter().find(|e| e.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_masses_match_telemetry() {
        let vessel = Vessel::llmsat1(0.0);
        let mass = vessel.total_mass();
        assert!(((mass - 4261.23095703125) / mass).abs() < 5e-3);
        assert!((mass - 4261.230793138563).abs() < 1e-9);
        assert!((vessel.max_delta_v() - 3496.2281239309).abs() < 1e-6);
    }

    #[test]
    fn known_burn_leaves_logged_tank_levels() {
        let mut vessel = Vessel::llmsat1(0.0);
        let before = vessel.total_mass();
        vessel.burn_consume(9.491729321790443).unwrap();
        let udmh = vessel.tank("UDMH").amount;
        let nto = vessel.tank("NTO").amount;
        assert!(((udmh - 1242.299927) / 1242.299927).abs() < 0.01);
        assert!(((nto - 1323.378174) / 1323.378174).abs() < 0.01);
        let expelled = before - vessel.total_mass();
        assert!(((expelled - 13.114776864950695) / 13.114776864950695).abs() < 5e-3);
    }

    #[test]
    fn overdraw_is_rejected_without_consumption() {
        let mut vessel = Vessel::llmsat1(0.0);
        let before = vessel.total_mass();
        let err = vessel.burn_consume(4000.0).unwrap_err();
        assert!(err.available < 4000.0);
        assert_eq!(vessel.total_mass(), before);
    }

    #[test]
    fn burn_sequences_conserve_mass_exactly() {
        let mut vessel = Vessel::llmsat1(0.0);
        let m0 = vessel.total_mass();
        let burns = [9.4917, 163.75, 4.73, 250.0, 1000.0];
        for dv in burns {
            vessel.burn_consume(dv).unwrap();
        }
        let total: f64 = burns.iter().sum();
        let expected = m0 * (-total / vessel.engine.exhaust_velocity()).exp();
        assert!(((vessel.total_mass() - expected) / expected).abs() < 1e-9);
        assert!(vessel.total_mass() >= vessel.dry_mass);
    }

    #[test]
    fn parts_tree_fixture_round_trips() {
        let vessel = Vessel::llmsat1(0.0);
        let raw = include_str!("../fixtures/parts_tree.json");
        let rendered = crate::render::json_block(&vessel.parts_tree);
        assert_eq!(rendered, raw.trim_end());
    }
}
