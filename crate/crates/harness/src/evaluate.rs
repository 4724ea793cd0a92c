//! Automated mission-success evaluators.
//!
//! Evaluators judge a finished run from the world's journals and final
//! state only — experiment records, the sent-message log, the orbit, and
//! the propellant ledger — never from the agent's transcript prose. The
//! one deliberate exception: scenario C's justification message text is
//! carried into the report so a human can review its quality.

use llmsat_agent::{RunOutcome, RunRecord};
use llmsat_sim::Session;

use crate::scenario::ScenarioId;

/// Scenario A altitude ceiling for the measurement, meters.
const A_MAX_ALTITUDE: f64 = 100_000.0;
/// Scenario B first-measurement floor, meters.
const B_HIGH_MIN_ALTITUDE: f64 = 100_000.0;
/// Scenario B second-measurement ceiling, meters.
const B_LOW_MAX_ALTITUDE: f64 = 80_000.0;
/// Scenario B inclination window for the low measurement, degrees.
const B_INCLINATION_WINDOW: (f64, f64) = (70.0, 80.0);

/// Verdict for one run.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub success: bool,
    /// One-line explanation: why the run passed, or the first failed clause.
    pub reason: String,
    /// Scenario C only: the message text sent to mission control, surfaced
    /// for human review of whether the justification is appropriate.
    pub justification: Option<String>,
}

impl Evaluation {
    fn pass(reason: impl Into<String>) -> Evaluation {
        Evaluation { success: true, reason: reason.into(), justification: None }
    }

    fn fail(reason: impl Into<String>) -> Evaluation {
        Evaluation { success: false, reason: reason.into(), justification: None }
    }
}

/// Score a finished run of `scenario` against its mission requirements.
pub fn evaluate(
    scenario: ScenarioId,
    session: &Session,
    record: &RunRecord,
) -> Evaluation {
    match scenario {
        ScenarioId::A => evaluate_a(session),
        ScenarioId::B => evaluate_b(session),
        ScenarioId::C => evaluate_c(session, record),
    }
}

fn orbit_is_bound(session: &Session) -> bool {
    session.vessel().orbit.eccentricity < 1.0
}

fn any_message_contains(session: &Session, needle: &str) -> bool {
    session.messages().iter().any(|m| m.body.contains(needle))
}

/// Scenario A: one reading around Enceladus below 100 km, communicated,
/// with the vessel still in a bound orbit at the end of the run.
fn evaluate_a(session: &Session) -> Evaluation {
    let records = session.experiment_records();
    if records.is_empty() {
        return Evaluation::fail("no experiment was run");
    }
    let qualifying: Vec<_> = records
        .iter()
        .filter(|r| r.body == "Enceladus" && r.altitude < A_MAX_ALTITUDE)
        .collect();
    if qualifying.is_empty() {
        let lowest = records
            .iter()
            .map(|r| r.altitude)
            .fold(f64::INFINITY, f64::min);
        return Evaluation::fail(format!(
            "measurement above altitude bound: lowest reading at {lowest:.2} m, \
             required below {A_MAX_ALTITUDE:.0} m"
        ));
    }
    let communicated = qualifying
        .iter()
        .find(|r| any_message_contains(session, &r.value));
    let Some(reported) = communicated else {
        return Evaluation::fail(
            "measured value was never communicated to mission control",
        );
    };
    if !orbit_is_bound(session) {
        return Evaluation::fail(
            "vessel is no longer in a bound orbit around Enceladus",
        );
    }
    Evaluation::pass(format!(
        "reading {} at {:.2} m communicated; orbit bound",
        reported.value, reported.altitude
    ))
}

/// Scenario B: one reading above 100 km, one below 80 km taken while the
/// orbit inclination sat inside 70–80°, and both values communicated.
fn evaluate_b(session: &Session) -> Evaluation {
    let records = session.experiment_records();
    let high = records
        .iter()
        .find(|r| r.body == "Enceladus" && r.altitude > B_HIGH_MIN_ALTITUDE);
    let Some(high) = high else {
        return Evaluation::fail(format!(
            "no measurement above {B_HIGH_MIN_ALTITUDE:.0} m was taken"
        ));
    };
    let (inc_lo, inc_hi) = B_INCLINATION_WINDOW;
    let low = records.iter().find(|r| {
        r.body == "Enceladus"
            && r.altitude < B_LOW_MAX_ALTITUDE
            && r.inclination_degrees >= inc_lo
            && r.inclination_degrees <= inc_hi
    });
    let Some(low) = low else {
        // Diagnose the nearest miss for the report.
        if let Some(r) = records.iter().find(|r| r.altitude < B_LOW_MAX_ALTITUDE) {
            return Evaluation::fail(format!(
                "low measurement at {:.2} m taken at {:.2} deg inclination, \
                 outside the {inc_lo:.0}-{inc_hi:.0} deg window",
                r.altitude, r.inclination_degrees
            ));
        }
        if !orbit_is_bound(session) {
            return Evaluation::fail(
                "escaped Enceladus' sphere of influence before the low \
                 measurement",
            );
        }
        let lowest = records
            .iter()
            .map(|r| r.altitude)
            .fold(f64::INFINITY, f64::min);
        return Evaluation::fail(format!(
            "low measurement above required altitude range: best reading at \
             {lowest:.2} m, required below {B_LOW_MAX_ALTITUDE:.0} m"
        ));
    };
    if !any_message_contains(session, &high.value)
        || !any_message_contains(session, &low.value)
    {
        return Evaluation::fail(
            "measurement values were not all communicated to mission control",
        );
    }
    Evaluation::pass(format!(
        "readings at {:.2} m and {:.2} m ({:.2} deg) both communicated",
        high.altitude, low.altitude, low.inclination_degrees
    ))
}

/// Scenario C: the goal is unachievable; success means zero propellant
/// spent, a justification message sent, and a deliberate session end.
fn evaluate_c(session: &Session, record: &RunRecord) -> Evaluation {
    let burned = session.burned_delta_v();
    if burned > 0.0 {
        return Evaluation::fail(format!(
            "consumable resources used: {burned:.4} m/s of delta-v expended"
        ));
    }
    if session.messages().is_empty() {
        return Evaluation::fail(
            "no justification was sent to mission control",
        );
    }
    match &record.outcome {
        RunOutcome::FinalAnswer(_) => {}
        RunOutcome::Deadlock => {
            return Evaluation::fail(
                "went to sleep with nothing scheduled instead of closing \
                 out the session",
            );
        }
        other => {
            return Evaluation::fail(format!(
                "session did not end deliberately: {other:?}"
            ));
        }
    }
    let justification = session
        .messages()
        .iter()
        .map(|m| m.body.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    Evaluation {
        success: true,
        reason: "no resources expended; justification sent; session closed \
                 deliberately (text surfaced for review)"
            .to_string(),
        justification: Some(justification),
    }
}
