//! Golden-value tests for the maneuver planners: every number here was
//! either logged by the reference mission stack or frozen from an
//! independent hand calculation (bisection Kepler solver, vis-viva,
//! plane-change chord).

use llmsat_orbit::{
    plan_apoapsis_change, plan_inclination_change, plan_periapsis_change, planner::apply_node,
    solve_kepler, CentralBody, KeplerOrbit,
};

/// Circular parking orbit the mission scenarios all start from.
fn scenario_orbit() -> KeplerOrbit {
    KeplerOrbit::circular(
        CentralBody::enceladus(),
        146_553.0016,
        0.0,
        270.894468106344_f64.to_radians(),
        120.76989683110502_f64.to_radians(),
        5.730634126227086,
        2_966_700_547.0,
    )
}

/// Clock instant of the first orbit readout in the reference mission log.
const LOG_INSTANT: f64 = 2_966_700_580.254697;

fn assert_rel(actual: f64, expected: f64, tol: f64) {
    let rel = ((actual - expected) / expected).abs();
    assert!(
        rel < tol,
        "expected {expected}, got {actual} (relative error {rel:e} >= {tol:e})"
    );
}

#[test]
fn circular_orbit_readout_matches_log() {
    let orbit = scenario_orbit();
    assert_rel(orbit.period(), 18623.487199149353, 1e-6);
    let state = orbit.state_at(LOG_INSTANT);
    assert_rel(state.speed, 134.49740511030674, 1e-9);
    assert_rel(state.radius - orbit.body.radius, 146_553.0016, 1e-9);
    let (tta, ttp) = orbit.apsis_times(LOG_INSTANT);
    assert!((ttp - 1604.5180664551262).abs() < 1e-5, "ttp {ttp}");
    assert_rel(tta, 10916.261666029803, 1e-6);
}

#[test]
fn periapsis_change_delta_v_table() {
    let orbit = scenario_orbit();
    let cases = [
        (95_000.0, 4.7320662173074926),
        (79_999.0, 6.270936865153523),
        (50.0, 16.102335751186484),
        (50_000.0, 9.609096806218602),
        (51_000.0, 9.491729321790443),
        (10_000.0, 14.70126039697065),
    ];
    for (target, expected_delta_v) in cases {
        let node = plan_periapsis_change(&orbit, target, LOG_INSTANT).unwrap();
        assert_rel(node.delta_v(), expected_delta_v, 5e-7);
        assert!(node.prograde < 0.0, "lowering burns point retrograde");
        assert_eq!(node.normal, 0.0);
        assert_eq!(node.radial, 0.0);
        assert_rel(node.predicted.periapsis_altitude(), target, 1e-9);
    }
}

#[test]
fn periapsis_change_from_ellipse_matches_log() {
    let orbit = KeplerOrbit::from_apsides(
        CentralBody::enceladus(),
        149_033.8416239093,
        143_216.07349275914,
        74.99999999999999_f64.to_radians(),
        270.894468106344_f64.to_radians(),
        120.76989683110502_f64.to_radians(),
        1.0,
        LOG_INSTANT,
    );
    let node = plan_periapsis_change(&orbit, 75_000.0, LOG_INSTANT).unwrap();
    assert_rel(node.delta_v(), 6.507499943827991, 5e-7);
}

#[test]
fn predicted_orbit_periods_match_log() {
    let orbit = scenario_orbit();
    let node95 = plan_periapsis_change(&orbit, 95_000.0, LOG_INSTANT).unwrap();
    assert_rel(node95.predicted.period(), 16846.743716686087, 1e-6);
    let node80 = plan_periapsis_change(&orbit, 79_999.0, LOG_INSTANT).unwrap();
    assert_rel(node80.predicted.period(), 16340.994151936167, 1e-6);
}

#[test]
fn apoapsis_speed_after_lowering_burn() {
    let orbit = scenario_orbit();
    let node = plan_periapsis_change(&orbit, 95_000.0, LOG_INSTANT).unwrap();
    let apo_speed = node
        .predicted
        .speed_at_radius(node.predicted.apoapsis_radius());
    assert_rel(apo_speed, 129.76533884864475, 1e-9);
}

#[test]
fn apoapsis_raise_burn_is_prograde() {
    let orbit = scenario_orbit();
    let node = plan_apoapsis_change(&orbit, 200_000.0, LOG_INSTANT).unwrap();
    assert_rel(node.prograde, 4.160428917, 1e-6);
    assert_rel(node.predicted.apoapsis_altitude(), 200_000.0, 1e-9);
    // An impulse at the periapsis leaves the burn point on the new orbit.
    assert_rel(
        node.predicted.periapsis_altitude(),
        orbit.periapsis_altitude(),
        1e-9,
    );
}

#[test]
fn inclination_plan_matches_log() {
    let orbit = scenario_orbit();
    let node = plan_inclination_change(&orbit, 75.0, LOG_INSTANT).unwrap();
    assert_rel(node.delta_v(), 163.75366397593598, 5e-7);
    assert_rel(node.prograde, -99.68691446020414, 5e-7);
    assert_rel(node.normal, 129.914516321109, 5e-7);
    assert!(node.radial.abs() < 1e-6, "radial {}", node.radial);
    assert_rel(node.predicted.inclination.to_degrees(), 75.0, 1e-12);
}

#[test]
fn half_turn_inclination_costs_twice_the_speed() {
    let orbit = scenario_orbit();
    let node = plan_inclination_change(&orbit, 180.0, LOG_INSTANT).unwrap();
    assert_rel(node.delta_v(), 2.0 * 134.49740511030674, 1e-9);
    assert!(plan_inclination_change(&orbit, 180.0001, LOG_INSTANT).is_err());
    assert!(plan_inclination_change(&orbit, -180.0001, LOG_INSTANT).is_err());
}

#[test]
fn zero_change_plans_are_free() {
    let orbit = scenario_orbit();
    let node = plan_periapsis_change(&orbit, orbit.periapsis_altitude(), LOG_INSTANT).unwrap();
    assert!(node.delta_v() < 1e-9);
    let node = plan_inclination_change(&orbit, 0.0, LOG_INSTANT).unwrap();
    assert!(node.delta_v() < 1e-12);
}

#[test]
fn planner_rejections_render_exact_messages() {
    let orbit = scenario_orbit();
    let err = plan_periapsis_change(&orbit, 262_100.0, LOG_INSTANT).unwrap_err();
    assert_eq!(
        err.to_string(),
        "new periapsis cannot be higher than the altitude of the burn (146.6 km)"
    );
    let err = plan_apoapsis_change(&orbit, 100.0, LOG_INSTANT).unwrap_err();
    assert_eq!(
        err.to_string(),
        "new apoapsis cannot be lower than the altitude of the burn (146.6 km)"
    );
}

#[test]
fn kepler_solution_matches_bisection_oracle() {
    let e = solve_kepler(1.0, 0.3).unwrap();
    assert!((e - 1.2880913132118375).abs() < 1e-12);
    assert!((e - 0.3 * e.sin() - 1.0).abs() < 1e-12);
    assert_eq!(solve_kepler(0.0, 0.5).unwrap(), 0.0);
    assert_eq!(solve_kepler(1.0, 0.0).unwrap(), 1.0);
}

#[test]
fn applying_nodes_reaches_predicted_orbits() {
    let orbit = scenario_orbit();
    let node = plan_periapsis_change(&orbit, 95_000.0, LOG_INSTANT).unwrap();
    let after = apply_node(&orbit, &node);
    assert_rel(after.periapsis_altitude(), 95_000.0, 1e-6);
    assert_rel(after.semi_major_axis, node.predicted.semi_major_axis, 1e-9);
    assert_rel(after.period(), node.predicted.period(), 1e-9);
    assert_eq!(after.mean_anomaly_epoch, node.predicted.mean_anomaly_epoch);

    let node = plan_inclination_change(&orbit, 75.0, LOG_INSTANT).unwrap();
    let after = apply_node(&orbit, &node);
    assert_rel(after.inclination.to_degrees(), 75.0, 1e-12);

    // A zero-impulse node leaves the orbit unchanged.
    let node = plan_periapsis_change(&orbit, orbit.periapsis_altitude(), LOG_INSTANT).unwrap();
    let after = apply_node(&orbit, &node);
    assert_rel(after.semi_major_axis, orbit.semi_major_axis, 1e-12);
    assert_eq!(after.eccentricity, 0.0);
}

#[test]
fn chained_plans_start_from_the_predicted_orbit() {
    // A second periapsis plan made on top of a queued node works with the
    // first node's predicted orbit, so it corrects rather than compounds:
    // raising a 50 m periapsis to 51 km takes a prograde burn at apoapsis.
    let orbit = scenario_orbit();
    let first = plan_periapsis_change(&orbit, 50.0, LOG_INSTANT).unwrap();
    let second = plan_periapsis_change(&first.predicted, 51_000.0, first.ut).unwrap();
    assert!(second.prograde > 0.0, "raising burn should be prograde");
    assert!(second.ut > first.ut, "burns must stay in time order");
    let chained = apply_node(&first.predicted, &second);
    assert_rel(chained.periapsis_altitude(), 51_000.0, 1e-6);
}
