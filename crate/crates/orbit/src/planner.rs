//! Impulsive maneuver planning: apsis changes at the opposite apsis,
//! plane changes at the cheaper of the next two nodal crossings.

use std::f64::consts::PI;
use std::fmt;

use crate::kepler::normalize_angle;
use crate::node::ManeuverNode;
use crate::orbit::{KeplerOrbit, CIRCULAR_ECCENTRICITY_EPSILON};

/// Planning failures. `Display` renders the operator-facing message (without
/// any `Error:` prefix, which the console adds).
#[derive(Clone, Debug, PartialEq)]
pub enum PlanError {
    /// Requested periapsis sits above the apoapsis the burn happens at.
    PeriapsisAboveBurnAltitude { burn_altitude: f64 },
    /// Requested apoapsis sits below the periapsis the burn happens at.
    ApoapsisBelowBurnAltitude { burn_altitude: f64 },
    /// Requested inclination outside [-180, 180] degrees.
    InclinationOutOfRange { requested_deg: f64 },
}

impl fmt::Display for PlanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanError::PeriapsisAboveBurnAltitude { burn_altitude } => write!(
                f,
                "new periapsis cannot be higher than the altitude of the burn ({:.1} km)",
                burn_altitude / 1000.0
            ),
            PlanError::ApoapsisBelowBurnAltitude { burn_altitude } => write!(
                f,
                "new apoapsis cannot be lower than the altitude of the burn ({:.1} km)",
                burn_altitude / 1000.0
            ),
            PlanError::InclinationOutOfRange { requested_deg } => write!(
                f,
                "new inclination must be between -180 and 180 degrees (got {requested_deg})"
            ),
        }
    }
}

impl std::error::Error for PlanError {}

fn collapse_eccentricity(e: f64) -> f64 {
    if e.abs() < CIRCULAR_ECCENTRICITY_EPSILON {
        0.0
    } else {
        e
    }
}

/// Plan a burn at the next apoapsis passage after `now` that moves the
/// periapsis to `new_periapsis` metres above the surface.
pub fn plan_periapsis_change(
    orbit: &KeplerOrbit,
    new_periapsis: f64,
    now: f64,
) -> Result<ManeuverNode, PlanError> {
    let burn_radius = orbit.apoapsis_radius();
    let burn_altitude = burn_radius - orbit.body.radius;
    if new_periapsis > burn_altitude {
        return Err(PlanError::PeriapsisAboveBurnAltitude { burn_altitude });
    }
    let burn_ut = now + orbit.time_to_apoapsis(now);

    let new_periapsis_radius = orbit.body.radius + new_periapsis;
    let semi_major_axis = 0.5 * (burn_radius + new_periapsis_radius);
    let eccentricity =
        collapse_eccentricity((burn_radius - new_periapsis_radius) / (burn_radius + new_periapsis_radius));

    let predicted = KeplerOrbit {
        body: orbit.body.clone(),
        semi_major_axis,
        eccentricity,
        inclination: orbit.inclination,
        longitude_of_ascending_node: orbit.longitude_of_ascending_node,
        argument_of_periapsis: orbit.argument_of_periapsis,
        mean_anomaly_epoch: PI,
        epoch: burn_ut,
    };

    let prograde = predicted.speed_at_radius(burn_radius) - orbit.speed_at_radius(burn_radius);
    Ok(ManeuverNode {
        prograde,
        normal: 0.0,
        radial: 0.0,
        ut: burn_ut,
        predicted,
    })
}

/// Plan a burn at the next periapsis passage after `now` that moves the
/// apoapsis to `new_apoapsis` metres above the surface.
pub fn plan_apoapsis_change(
    orbit: &KeplerOrbit,
    new_apoapsis: f64,
    now: f64,
) -> Result<ManeuverNode, PlanError> {
    let burn_radius = orbit.periapsis_radius();
    let burn_altitude = burn_radius - orbit.body.radius;
    if new_apoapsis < burn_altitude {
        return Err(PlanError::ApoapsisBelowBurnAltitude { burn_altitude });
    }
    let burn_ut = now + orbit.time_to_periapsis(now);

    let new_apoapsis_radius = orbit.body.radius + new_apoapsis;
    let semi_major_axis = 0.5 * (burn_radius + new_apoapsis_radius);
    let eccentricity =
        collapse_eccentricity((new_apoapsis_radius - burn_radius) / (new_apoapsis_radius + burn_radius));

    let predicted = KeplerOrbit {
        body: orbit.body.clone(),
        semi_major_axis,
        eccentricity,
        inclination: orbit.inclination,
        longitude_of_ascending_node: orbit.longitude_of_ascending_node,
        argument_of_periapsis: orbit.argument_of_periapsis,
        mean_anomaly_epoch: 0.0,
        epoch: burn_ut,
    };

    let prograde = predicted.speed_at_radius(burn_radius) - orbit.speed_at_radius(burn_radius);
    Ok(ManeuverNode {
        prograde,
        normal: 0.0,
        radial: 0.0,
        ut: burn_ut,
        predicted,
    })
}

/// Plan a plane-change burn to the given inclination (degrees) at the
/// cheaper of the next ascending/descending node crossings after `now`.
/// Ties pick the ascending node.
pub fn plan_inclination_change(
    orbit: &KeplerOrbit,
    new_inclination_deg: f64,
    now: f64,
) -> Result<ManeuverNode, PlanError> {
    if !(-180.0..=180.0).contains(&new_inclination_deg) {
        return Err(PlanError::InclinationOutOfRange {
            requested_deg: new_inclination_deg,
        });
    }
    let new_inclination = new_inclination_deg.to_radians();
    let delta_i = new_inclination - orbit.inclination;

    // Nodal crossings sit at argument of latitude 0 (ascending) and pi
    // (descending); convert to true anomalies via the argument of periapsis.
    let nu_ascending = normalize_angle(-orbit.argument_of_periapsis);
    let nu_descending = normalize_angle(PI - orbit.argument_of_periapsis);

    let candidate = |true_anomaly: f64, ascending: bool| {
        let burn_ut = now + orbit.time_to_true_anomaly(now, true_anomaly);
        let state = orbit.state_at(burn_ut);
        let v_h = state.horizontal_speed;
        let v_r = state.radial_speed;
        let speed = state.speed;
        let normal_sign = if ascending { 1.0 } else { -1.0 };
        let prograde = v_h * v_h * (delta_i.cos() - 1.0) / speed;
        let normal = normal_sign * v_h * delta_i.sin();
        let radial = -v_r * v_h * (delta_i.cos() - 1.0) / speed;
        let delta_v = 2.0 * v_h * (0.5 * delta_i).sin().abs();
        (burn_ut, prograde, normal, radial, delta_v)
    };

    let asc = candidate(nu_ascending, true);
    let desc = candidate(nu_descending, false);
    let (burn_ut, prograde, normal, radial, _) = if asc.4 <= desc.4 { asc } else { desc };

    let predicted = KeplerOrbit {
        body: orbit.body.clone(),
        semi_major_axis: orbit.semi_major_axis,
        eccentricity: orbit.eccentricity,
        inclination: new_inclination,
        longitude_of_ascending_node: orbit.longitude_of_ascending_node,
        argument_of_periapsis: orbit.argument_of_periapsis,
        mean_anomaly_epoch: orbit.mean_anomaly_at(burn_ut),
        epoch: burn_ut,
    };

    Ok(ManeuverNode {
        prograde,
        normal,
        radial,
        ut: burn_ut,
        predicted,
    })
}

/// Execute a node exactly: the resulting orbit matches the node's prediction.
pub fn apply_node(orbit: &KeplerOrbit, node: &ManeuverNode) -> KeplerOrbit {
    apply_node_with_error(orbit, node, 0.0)
}

/// Execute a node whose delivered impulse is scaled by `(1 + relative_error)`
/// along the planned direction. Plane-change nodes are executed exactly:
/// a scaled plane-change impulse is no longer a pure rotation, so the error
/// model only covers tangential (apsis) burns.
pub fn apply_node_with_error(
    orbit: &KeplerOrbit,
    node: &ManeuverNode,
    relative_error: f64,
) -> KeplerOrbit {
    if node.normal != 0.0 || node.radial != 0.0 {
        return node.predicted.clone();
    }

    // Tangential burn at an apsis of the current orbit: reconstruct the new
    // orbit from vis-viva rather than trusting the prediction.
    let state = orbit.state_at(node.ut);
    let burn_radius = state.radius;
    let new_speed = state.speed + node.prograde * (1.0 + relative_error);
    let semi_major_axis =
        1.0 / (2.0 / burn_radius - new_speed * new_speed / orbit.body.mu);
    let other_radius = 2.0 * semi_major_axis - burn_radius;

    let mean_anomaly_old = orbit.mean_anomaly_at(node.ut);
    let burn_at_apoapsis = (mean_anomaly_old - PI).abs() < PI / 2.0;

    let mut argument_of_periapsis = orbit.argument_of_periapsis;
    let (apoapsis_radius, periapsis_radius, mean_anomaly_epoch) = if burn_at_apoapsis {
        if other_radius <= burn_radius {
            (burn_radius, other_radius, PI)
        } else {
            // The burn raised the speed past circular: the point became the
            // periapsis, which sits half a turn from the old apsis line.
            argument_of_periapsis = normalize_angle(argument_of_periapsis + PI);
            (other_radius, burn_radius, 0.0)
        }
    } else if other_radius >= burn_radius {
        (other_radius, burn_radius, 0.0)
    } else {
        argument_of_periapsis = normalize_angle(argument_of_periapsis + PI);
        (burn_radius, other_radius, PI)
    };

    let eccentricity = collapse_eccentricity(
        (apoapsis_radius - periapsis_radius) / (apoapsis_radius + periapsis_radius),
    );

    KeplerOrbit {
        body: orbit.body.clone(),
        semi_major_axis,
        eccentricity,
        inclination: orbit.inclination,
        longitude_of_ascending_node: orbit.longitude_of_ascending_node,
        argument_of_periapsis,
        mean_anomaly_epoch,
        epoch: node.ut,
    }
}
