//! Discrete-event scheduler properties: delivery order, deadlock
//! detection, clock/energy coupling, and the all-or-nothing semantics of
//! rejected maneuver executions.

use llmsat_sim::time::iso_compact;
use llmsat_sim::{ConsoleReply, Deadlock, Session, SessionConfig, BOOT_OFFSET, SCENARIO_START_UT};
use proptest::prelude::*;

fn run(session: &mut Session, line: &str) -> String {
    match session.execute_command(line) {
        ConsoleReply::Text(text) => text,
        ConsoleReply::Quit => panic!("unexpected quit from {line:?}"),
    }
}

/// An ISO second (no fraction) `offset` seconds after boot, in the exact
/// shape `add_alarm -time` accepts.
fn alarm_time(offset: u32) -> String {
    let ut = SCENARIO_START_UT + BOOT_OFFSET + f64::from(offset);
    iso_compact(ut).split('.').next().unwrap().to_string()
}

proptest! {
    /// Alarms fire exactly once each, in nondecreasing trigger time,
    /// regardless of creation order, and the stream ends in a deadlock.
    #[test]
    fn alarms_fire_in_time_order_and_exactly_once(
        offsets in prop::collection::vec(60u32..86_000, 1..8)
    ) {
        let mut s = Session::new(SessionConfig::default());
        let mut created_ids = Vec::new();
        for (i, offset) in offsets.iter().enumerate() {
            let obs = run(&mut s, &format!("add_alarm -name A{i} -time {}", alarm_time(*offset)));
            prop_assert!(obs.starts_with("New alarm created:\n{"), "{obs}");
            let json: serde_json::Value =
                serde_json::from_str(&obs["New alarm created:\n".len()..]).unwrap();
            created_ids.push(json["id"].as_str().unwrap().to_string());
        }
        prop_assert_eq!(s.pending_alarms().len(), offsets.len());

        let mut fired_ids = Vec::new();
        let mut last_clock = s.clock();
        for _ in &offsets {
            let notification = s.await_event().expect("alarm still pending");
            prop_assert!(notification.contains("::AlarmManager:: Alarm triggered:\n"));
            prop_assert!(s.clock() >= last_clock, "clock never rewinds");
            last_clock = s.clock();
            let json_start = notification.find('{').unwrap();
            let json: serde_json::Value =
                serde_json::from_str(&notification[json_start..]).unwrap();
            fired_ids.push(json["id"].as_str().unwrap().to_string());
        }

        created_ids.sort();
        let mut fired_sorted = fired_ids.clone();
        fired_sorted.sort();
        prop_assert_eq!(created_ids, fired_sorted, "every alarm fires exactly once");
        prop_assert!(s.pending_alarms().is_empty());
        prop_assert_eq!(s.await_event(), Err(Deadlock));
    }

    /// A rejected execution is all-or-nothing: the orbit and the
    /// propellant load stay bit-identical and the queue survives.
    #[test]
    fn rejected_execute_is_bitwise_inert(target in 0.0f64..49_000.0) {
        let mut s = Session::new(SessionConfig::default());
        let plan = run(&mut s, &format!("operation_periapsis --new_periapsis {target}"));
        prop_assert!(plan.contains("The following nodes were generated:"), "{plan}");

        let orbit = s.vessel().orbit.clone();
        let tanks: Vec<u64> = s.vessel().tanks.iter().map(|t| t.amount.to_bits()).collect();

        let rejection = run(&mut s, "execute_maneuver_nodes");
        prop_assert!(rejection.starts_with("EXCEPTION of type 'ValueError' occurred"), "{rejection}");
        prop_assert!(rejection.contains("falls below safe altitude threshold of 50000m"));

        let after = &s.vessel().orbit;
        prop_assert_eq!(orbit.semi_major_axis.to_bits(), after.semi_major_axis.to_bits());
        prop_assert_eq!(orbit.eccentricity.to_bits(), after.eccentricity.to_bits());
        prop_assert_eq!(orbit.inclination.to_bits(), after.inclination.to_bits());
        prop_assert_eq!(orbit.mean_anomaly_epoch.to_bits(), after.mean_anomaly_epoch.to_bits());
        let tanks_after: Vec<u64> = s.vessel().tanks.iter().map(|t| t.amount.to_bits()).collect();
        prop_assert_eq!(&tanks[..2], &tanks_after[..2], "propellant untouched");
        prop_assert_eq!(s.node_count(), 1, "queue retained for inspection");
        prop_assert!(!s.autopilot_on());
        prop_assert_eq!(s.burned_delta_v(), 0.0);
        prop_assert_eq!(s.await_event(), Err(Deadlock), "no burn was scheduled");
    }

    /// Any accepted plan sequence keeps the vessel above the safe-altitude
    /// floor at every wakeup, and propellant never goes negative.
    #[test]
    fn accepted_plans_never_violate_the_safety_floor(
        ops in prop::collection::vec(
            prop_oneof![
                (50_000.0f64..146_000.0).prop_map(|t| ("operation_periapsis --new_periapsis", t)),
                (147_000.0f64..400_000.0).prop_map(|t| ("operation_apoapsis --new_apoapsis", t)),
                (0.0f64..179.0).prop_map(|t| ("operation_inclination --new_inclination", t)),
            ],
            1..4,
        )
    ) {
        let mut s = Session::new(SessionConfig::default());
        let mut queued = 0usize;
        for (command, target) in &ops {
            let obs = run(&mut s, &format!("{command} {target}"));
            if obs.contains("The following nodes were generated:") {
                queued += 1;
            } else {
                prop_assert!(obs.starts_with("Error: "), "unexpected plan reply: {obs}");
            }
        }
        prop_assert_eq!(s.node_count(), queued);

        let obs = run(&mut s, "execute_maneuver_nodes");
        prop_assert!(
            obs.contains(&format!("Executing {queued} maneuver node(s).")),
            "{obs}"
        );

        while let Ok(_notification) = s.await_event() {
            let periapsis = s.vessel().orbit.periapsis_altitude();
            prop_assert!(
                periapsis >= 50_000.0 - 1e-6,
                "periapsis {periapsis} dipped below the floor"
            );
            for tank in &s.vessel().tanks {
                prop_assert!(tank.amount >= 0.0, "{} went negative", tank.name);
            }
        }
        if queued > 0 {
            prop_assert!(!s.autopilot_on(), "autopilot off after completion");
            prop_assert!(s.burned_delta_v() > 0.0);
        }
    }

    /// Electric charge is a pure function of mission elapsed time: the
    /// session recomputes it on every advance, whatever commands ran.
    #[test]
    fn electric_charge_tracks_mission_elapsed_time(commands in 1usize..12) {
        let mut s = Session::new(SessionConfig::default());
        for i in 0..commands {
            match i % 3 {
                0 => run(&mut s, "get_ut"),
                1 => run(&mut s, "get_met"),
                _ => run(&mut s, "get_orbit"),
            };
            let met = s.clock() - SCENARIO_START_UT;
            let tank = s.vessel().tank("ElectricCharge");
            let expected = (tank.max - 0.2 * met).max(0.0);
            prop_assert_eq!(tank.amount.to_bits(), expected.to_bits());
        }
    }

    /// Message and experiment journals grow append-only with
    /// nondecreasing timestamps under arbitrary interleavings.
    #[test]
    fn journals_are_append_only_and_monotonic(actions in prop::collection::vec(0u8..3, 1..10)) {
        let mut s = Session::new(SessionConfig::default());
        let mut message_count = 0usize;
        let mut experiment_count = 0usize;
        for (i, action) in actions.iter().enumerate() {
            match action {
                0 => {
                    run(&mut s, &format!("send_message -message 'ping {i}'"));
                    message_count += 1;
                }
                1 => {
                    run(&mut s, "run_experiment -name 'Temperature Scan'");
                    experiment_count += 1;
                }
                _ => {
                    run(&mut s, "get_orbit");
                }
            }
            prop_assert_eq!(s.messages().len(), message_count);
            prop_assert_eq!(s.experiment_records().len(), experiment_count);
        }
        let stamps: Vec<f64> = s.messages().iter().map(|m| m.timestamp).collect();
        prop_assert!(stamps.windows(2).all(|w| w[0] <= w[1]), "message journal is time-ordered");
        let experiment_stamps: Vec<&str> =
            s.experiment_records().iter().map(|r| r.timestamp.as_str()).collect();
        prop_assert!(
            experiment_stamps.windows(2).all(|w| w[0] <= w[1]),
            "experiment journal is time-ordered"
        );
    }
}

#[test]
fn fresh_session_sleep_deadlocks_immediately() {
    let mut s = Session::new(SessionConfig::default());
    assert_eq!(s.await_event(), Err(Deadlock));
    // The session is still usable after reporting the deadlock.
    let obs = run(&mut s, "get_met");
    assert!(obs.starts_with("T+ "), "{obs}");
}

#[test]
fn mixed_event_kinds_deliver_in_fire_order() {
    let mut s = Session::new(SessionConfig::default());
    // Alarm an hour out, a burn ~3 hours out, another alarm ~4 hours out.
    run(&mut s, &format!("add_alarm -name Early -time {}", alarm_time(3_600)));
    run(&mut s, "operation_periapsis --new_periapsis 95000");
    run(&mut s, &format!("add_alarm -name Late -time {}", alarm_time(14_400)));
    let obs = run(&mut s, "execute_maneuver_nodes");
    assert!(obs.contains("Executing 1 maneuver node(s)."), "{obs}");

    let first = s.await_event().unwrap();
    assert!(first.contains("Alarm triggered"), "{first}");
    assert!(first.contains("\"name\": \"Early\""), "{first}");
    let clock_after_first = s.clock();

    let second = s.await_event().unwrap();
    assert!(
        second.ends_with("Autopilot has completed execution of all nodes"),
        "{second}"
    );
    assert!(s.clock() >= clock_after_first);
    let clock_after_second = s.clock();

    let third = s.await_event().unwrap();
    assert!(third.contains("\"name\": \"Late\""), "{third}");
    assert!(s.clock() >= clock_after_second);

    assert_eq!(s.await_event(), Err(Deadlock));
}

#[test]
fn clock_jumps_to_the_event_time_on_wakeup() {
    let mut s = Session::new(SessionConfig::default());
    run(&mut s, &format!("add_alarm -name Wake -time {}", alarm_time(7_200)));
    let before = s.clock();
    s.await_event().unwrap();
    let expected = SCENARIO_START_UT + BOOT_OFFSET + 7_200.0;
    assert!(s.clock() >= before);
    // The alarm string carries whole seconds, so the wakeup lands on the
    // truncated second boundary.
    assert!((s.clock() - expected.floor()).abs() < 1.0 + 1e-9, "clock {}", s.clock());
}
