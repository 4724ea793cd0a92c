//! The console session: a single-vessel discrete-event world with a virtual
//! clock, alarm scheduler, maneuver queue, journals, and the seven console
//! services dispatched behind the command registry.

use std::collections::VecDeque;
use std::fmt;

use llmsat_orbit::{
    apply_node_with_error, plan_apoapsis_change, plan_inclination_change, plan_periapsis_change,
    KeplerOrbit, ManeuverNode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Number, Value};

use crate::console::{
    find_command, parse_args, render_command_listing, render_command_listing_verbose,
    render_help_topic, tokenize, usage_error_message, CommandSpec, ParsedArgs,
};
use crate::render::{json_block, resources_table, ResourceRow};
use crate::time::{human_clock, iso_compact, met_clock, parse_alarm_time, pyfloat};
use crate::vessel::{ExperimentRecord, Vessel};

/// Fixed reading reported by each science experiment; the thermometer always
/// reads the ambient value at Enceladus.
const EXPERIMENT_READINGS: &[(&str, &str)] = &[("Temperature Scan", "127.0K")];

/// Universal time, in seconds, of the reference scenario start
/// (2045-01-03T19:29:07).
pub const SCENARIO_START_UT: f64 = 2_966_700_547.0;

/// Seconds between scenario start and the first dashboard render.
pub const BOOT_OFFSET: f64 = 28.334702;

/// Per-command simulated latency applied before an observation is stamped.
pub const DEFAULT_LATENCY: f64 = 5.0;

#[derive(Clone, Debug)]
pub struct SessionConfig {
    /// Mission brief text shown in the dashboard and by `read_mission_brief`.
    pub mission_brief: String,
    /// Universal time at which the mission clock (MET 0) starts.
    pub start_ut: f64,
    /// Seconds of boot time already elapsed when the session opens.
    pub boot_offset: f64,
    /// Simulated seconds consumed by every command round trip.
    pub latency: f64,
    /// Standard deviation of the zero-mean relative delta-v execution error.
    pub noise_sigma: f64,
    /// Seed for the session RNG (alarm ids, execution noise).
    pub seed: u64,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            mission_brief: String::new(),
            start_ut: SCENARIO_START_UT,
            boot_offset: BOOT_OFFSET,
            latency: DEFAULT_LATENCY,
            noise_sigma: 0.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Alarm {
    pub id: String,
    pub name: String,
    pub description: String,
    /// Universal time the alarm fires at.
    pub time: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TaskStatus {
    Pending,
    InProgress,
    Done,
}

impl TaskStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TaskStatus::Pending => "pending",
            TaskStatus::InProgress => "in_progress",
            TaskStatus::Done => "done",
        }
    }

    fn parse(text: &str) -> Option<TaskStatus> {
        match text {
            "pending" => Some(TaskStatus::Pending),
            "in_progress" => Some(TaskStatus::InProgress),
            "done" => Some(TaskStatus::Done),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Task {
    pub ordinal: usize,
    pub name: String,
    pub description: String,
    pub status: TaskStatus,
}

#[derive(Clone, Debug)]
pub struct SentMessage {
    /// Universal time the message was journaled at.
    pub timestamp: f64,
    pub body: String,
}

#[derive(Clone, Debug)]
struct QueuedNode {
    id: u64,
    node: ManeuverNode,
    /// True once an accepted execute has scheduled this node's burn.
    scheduled: bool,
}

#[derive(Clone, Debug)]
enum EventKind {
    AlarmTrigger(Alarm),
    Burn { node_id: u64 },
    AutopilotComplete,
}

#[derive(Clone, Debug)]
struct Event {
    fire: f64,
    seq: u64,
    kind: EventKind,
}

/// A command's console reply.
#[derive(Clone, Debug, PartialEq)]
pub enum ConsoleReply {
    Text(String),
    /// The `quit` command: the transport should disconnect.
    Quit,
}

/// Sleeping with no scheduled future event: the session would never wake.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Deadlock;

impl fmt::Display for Deadlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no future events are scheduled; sleeping now would never wake")
    }
}

impl std::error::Error for Deadlock {}

pub struct Session {
    config: SessionConfig,
    clock: f64,
    vessel: Vessel,
    pending_alarms: Vec<Alarm>,
    tasks: Vec<Task>,
    messages: Vec<SentMessage>,
    experiment_records: Vec<ExperimentRecord>,
    queue: Vec<QueuedNode>,
    autopilot_on: bool,
    events: Vec<Event>,
    next_seq: u64,
    next_node_id: u64,
    pending_notifications: VecDeque<String>,
    rng: ChaCha8Rng,
    burned_delta_v: f64,
}

impl Session {
    pub fn new(config: SessionConfig) -> Self {
        let clock = config.start_ut + config.boot_offset;
        let rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut vessel = Vessel::llmsat1(config.start_ut);
        vessel.drain_electric_charge(clock - config.start_ut);
        Session {
            config,
            clock,
            vessel,
            pending_alarms: Vec::new(),
            tasks: Vec::new(),
            messages: Vec::new(),
            experiment_records: Vec::new(),
            queue: Vec::new(),
            autopilot_on: false,
            events: Vec::new(),
            next_seq: 0,
            next_node_id: 0,
            pending_notifications: VecDeque::new(),
            rng,
            burned_delta_v: 0.0,
        }
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub fn vessel(&self) -> &Vessel {
        &self.vessel
    }

    pub fn messages(&self) -> &[SentMessage] {
        &self.messages
    }

    pub fn experiment_records(&self) -> &[ExperimentRecord] {
        &self.experiment_records
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn pending_alarms(&self) -> &[Alarm] {
        &self.pending_alarms
    }

    pub fn node_count(&self) -> usize {
        self.queue.len()
    }

    pub fn autopilot_on(&self) -> bool {
        self.autopilot_on
    }

    /// Total delta-v actually burned so far (zero if no node ever executed).
    pub fn burned_delta_v(&self) -> f64 {
        self.burned_delta_v
    }

    fn sync_derived_state(&mut self) {
        let met = self.clock - self.config.start_ut;
        self.vessel.drain_electric_charge(met);
    }

    fn schedule(&mut self, at: f64, kind: EventKind) {
        let fire = at.max(self.clock);
        let seq = self.next_seq;
        self.next_seq += 1;
        self.events.push(Event { fire, seq, kind });
    }

    fn pop_next_event(&mut self) -> Option<Event> {
        if self.events.is_empty() {
            return None;
        }
        let mut best = 0;
        for i in 1..self.events.len() {
            let (a, b) = (&self.events[i], &self.events[best]);
            if a.fire.total_cmp(&b.fire).then(a.seq.cmp(&b.seq)) == std::cmp::Ordering::Less {
                best = i;
            }
        }
        Some(self.events.remove(best))
    }

    fn apply_event(&mut self, event: Event) {
        match event.kind {
            EventKind::AlarmTrigger(alarm) => {
                self.pending_alarms.retain(|a| a.id != alarm.id);
                let text = alarm_trigger_text(&alarm, event.fire);
                self.pending_notifications.push_back(text);
            }
            EventKind::Burn { node_id } => {
                if let Some(pos) = self.queue.iter().position(|q| q.id == node_id) {
                    let queued = self.queue.remove(pos);
                    let relative_error = self.noise_draw();
                    self.vessel.orbit =
                        apply_node_with_error(&self.vessel.orbit, &queued.node, relative_error);
                    // Plans are propellant-checked before acceptance, so the
                    // cap only matters under extreme execution noise.
                    let delta_v = queued.node.delta_v();
                    let feasible = delta_v.min(self.vessel.max_delta_v());
                    self.vessel
                        .burn_consume(feasible)
                        .expect("capped burn is within remaining capability");
                    self.burned_delta_v += delta_v;
                }
            }
            EventKind::AutopilotComplete => {
                self.autopilot_on = false;
                let text = format!(
                    "{} | Autopilot has completed execution of all nodes",
                    iso_compact(event.fire)
                );
                self.pending_notifications.push_back(text);
            }
        }
    }

    /// Advance the virtual clock, firing every event due on the way in
    /// (fire time, schedule order) sequence.
    fn advance_to(&mut self, target: f64) {
        loop {
            let due = self
                .events
                .iter()
                .map(|e| e.fire)
                .fold(f64::INFINITY, f64::min);
            if due > target {
                break;
            }
            let event = self.pop_next_event().expect("event exists at due time");
            self.clock = self.clock.max(event.fire);
            self.apply_event(event);
        }
        self.clock = self.clock.max(target);
        self.sync_derived_state();
    }

    fn noise_draw(&mut self) -> f64 {
        if self.config.noise_sigma == 0.0 {
            return 0.0;
        }
        // Box-Muller transform over two uniform draws.
        let u1: f64 = self.rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = self.rng.gen();
        let z = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        self.config.noise_sigma * z
    }

    fn new_alarm_id(&mut self) -> String {
        let mut bytes: [u8; 16] = self.rng.gen();
        bytes[6] = (bytes[6] & 0x0f) | 0x40;
        bytes[8] = (bytes[8] & 0x3f) | 0x80;
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// The dashboard payload delivered at connect time.
    pub fn render_dashboard(&mut self) -> String {
        self.sync_derived_state();
        format!(
            "SatelliteOS\nUT: {} | MET: {}\n\n{}\n\nTask Plan:\n{}\n\nSpacecraft Properties:\n{}\n\nResources:\n{}\n\nDocumented commands (use 'help -v' for verbose/'help <topic>' for details):\n\n{}\n\nSatelliteOS\n>",
            iso_compact(self.clock),
            met_clock(self.clock - self.config.start_ut),
            self.config.mission_brief.trim_end(),
            self.task_plan_body(),
            json_block(&self.properties_document()),
            resources_table(&self.resource_rows()),
            render_command_listing(),
        )
    }

    /// Run one command line: advance the clock by the configured latency,
    /// fire any events that came due, then dispatch.
    pub fn execute_command(&mut self, line: &str) -> ConsoleReply {
        let target = self.clock + self.config.latency;
        self.advance_to(target);

        let tokens = tokenize(line);
        if tokens.is_empty() {
            return ConsoleReply::Text(String::new());
        }
        let name = tokens[0].clone();
        let args = &tokens[1..];

        if name == "help" {
            return ConsoleReply::Text(self.help_command(args));
        }
        if name == "quit" {
            return ConsoleReply::Quit;
        }
        let Some(cmd) = find_command(&name) else {
            return ConsoleReply::Text(format!(
                "Unknown command: '{name}'. Type 'help' for a list of commands."
            ));
        };
        let values = match parse_args(cmd, args) {
            Err(error_text) => return ConsoleReply::Text(error_text),
            Ok(ParsedArgs::Help) => return ConsoleReply::Text(render_help_topic(cmd)),
            Ok(ParsedArgs::Values(values)) => values,
        };

        let (body, stamped) = self.dispatch(cmd, &values);
        if stamped {
            ConsoleReply::Text(format!("{} | {}", iso_compact(self.clock), body))
        } else {
            ConsoleReply::Text(body)
        }
    }

    /// Block until the next notification; the clock jumps to its event time.
    pub fn await_event(&mut self) -> Result<String, Deadlock> {
        loop {
            if let Some(text) = self.pending_notifications.pop_front() {
                return Ok(text);
            }
            let Some(event) = self.pop_next_event() else {
                return Err(Deadlock);
            };
            self.clock = self.clock.max(event.fire);
            self.apply_event(event);
            self.sync_derived_state();
        }
    }

    fn help_command(&self, args: &[String]) -> String {
        match args {
            [] => render_command_listing(),
            [flag] if flag == "-v" || flag == "--verbose" => render_command_listing_verbose(),
            [topic, ..] => match find_command(topic) {
                Some(cmd) => render_help_topic(cmd),
                None => format!("No help on '{topic}'"),
            },
        }
    }

    fn dispatch(
        &mut self,
        cmd: &'static CommandSpec,
        values: &std::collections::HashMap<String, String>,
    ) -> (String, bool) {
        let arg = |key: &str| values.get(key).cloned().unwrap_or_default();
        match cmd.name {
            "get_orbit" => (
                json_block(&orbit_document(&self.vessel.orbit, self.clock, None)),
                true,
            ),
            "operation_periapsis" => self.plan_command(cmd, PlanKind::Periapsis, &arg("new_periapsis")),
            "operation_apoapsis" => self.plan_command(cmd, PlanKind::Apoapsis, &arg("new_apoapsis")),
            "operation_inclination" => {
                self.plan_command(cmd, PlanKind::Inclination, &arg("new_inclination"))
            }
            "execute_maneuver_nodes" => self.execute_nodes(),
            "remove_nodes" => {
                let removed = self.queue.len();
                self.queue.clear();
                self.events.retain(|e| {
                    !matches!(e.kind, EventKind::Burn { .. } | EventKind::AutopilotComplete)
                });
                self.autopilot_on = false;
                (format!("Removed {removed} maneuver node(s)."), true)
            }
            "get_nodes" => {
                let nodes: Vec<Value> = self
                    .queue
                    .iter()
                    .map(|q| node_document(&q.node, self.clock))
                    .collect();
                (json_block(&Value::Array(nodes)), true)
            }
            "check_autopilot_status" => (
                format!(
                    "Autopilot Status: {}",
                    if self.autopilot_on { "ON" } else { "OFF" }
                ),
                true,
            ),
            "add_alarm" => self.add_alarm_command(&arg("name"), &arg("time"), &arg("desc")),
            "add_alarm_at_periapsis" => self.add_apsis_alarm(&arg("name"), &arg("desc"), true),
            "add_alarm_at_apoapsis" => self.add_apsis_alarm(&arg("name"), &arg("desc"), false),
            "get_alarms" => {
                let alarms: Vec<Value> = self.pending_alarms.iter().map(alarm_json).collect();
                (json_block(&Value::Array(alarms)), false)
            }
            "get_experiments" => {
                let mut map = Map::new();
                for exp in &self.vessel.experiments {
                    map.insert(
                        exp.name.clone(),
                        serde_json::to_value(exp).expect("experiment serializes"),
                    );
                }
                (json_block(&Value::Object(map)), false)
            }
            "run_experiment" => self.run_experiment_command(&arg("name")),
            "send_message" => {
                self.messages.push(SentMessage {
                    timestamp: self.clock,
                    body: arg("message"),
                });
                ("Message sent".to_string(), false)
            }
            "add_task" => {
                let ordinal = self.tasks.len() + 1;
                let name = arg("name");
                self.tasks.push(Task {
                    ordinal,
                    name: name.clone(),
                    description: arg("desc"),
                    status: TaskStatus::Pending,
                });
                (format!("Task {ordinal}:'{name}' created"), false)
            }
            "read_tasks" => (self.task_plan_body(), false),
            "set_task_status" => self.set_task_status_command(cmd, &arg("id"), &arg("status")),
            "get_spacecraft_properties" => (json_block(&self.properties_document()), false),
            "get_resources" => (resources_table(&self.resource_rows()), false),
            "get_parts_tree" => (json_block(&self.vessel.parts_tree), false),
            "get_ut" => (iso_compact(self.clock), false),
            "get_met" => (met_clock(self.clock - self.config.start_ut), false),
            "read_mission_brief" => (self.config.mission_brief.trim_end().to_string(), false),
            other => unreachable!("unhandled registered command {other}"),
        }
    }

    fn plan_command(
        &mut self,
        cmd: &'static CommandSpec,
        kind: PlanKind,
        raw_target: &str,
    ) -> (String, bool) {
        let target: f64 = match raw_target.parse() {
            Ok(v) => v,
            Err(_) => {
                let flag = cmd.required[0].flag;
                return (
                    usage_error_message(
                        cmd,
                        &format!("argument {flag}: invalid float value: '{raw_target}'"),
                    ),
                    false,
                );
            }
        };
        // Nodes chain: plan from the orbit as it will be after every node
        // already in the queue, never earlier than the last queued burn.
        let base = self
            .queue
            .last()
            .map(|q| q.node.predicted.clone())
            .unwrap_or_else(|| self.vessel.orbit.clone());
        let from = self
            .queue
            .last()
            .map(|q| q.node.ut)
            .unwrap_or(self.clock)
            .max(self.clock);
        let planned = match kind {
            PlanKind::Periapsis => plan_periapsis_change(&base, target, from),
            PlanKind::Apoapsis => plan_apoapsis_change(&base, target, from),
            PlanKind::Inclination => plan_inclination_change(&base, target, from),
        };
        match planned {
            Err(e) => (format!("Error: {e}"), false),
            Ok(node) => {
                let document = node_document(&node, self.clock);
                let id = self.next_node_id;
                self.next_node_id += 1;
                self.queue.push(QueuedNode {
                    id,
                    node,
                    scheduled: false,
                });
                (
                    format!("The following nodes were generated:\n{}", json_block(&document)),
                    true,
                )
            }
        }
    }

    fn execute_nodes(&mut self) -> (String, bool) {
        // Plan-level validation: walk the whole queue before anything burns.
        for queued in &self.queue {
            let periapsis = queued.node.predicted.periapsis_altitude();
            let body = &self.vessel.orbit.body;
            if periapsis < body.safe_altitude {
                return (
                    format!(
                        "EXCEPTION of type 'ValueError' occurred with message: Planned maneuver node at {} falls below safe altitude threshold of {}m around {}: {}m. Cannot comply",
                        human_clock(queued.node.ut),
                        body.safe_altitude,
                        body.name,
                        pyfloat(periapsis),
                    ),
                    false,
                );
            }
        }
        let total_delta_v: f64 = self.queue.iter().map(|q| q.node.delta_v()).sum();
        let available = self.vessel.max_delta_v();
        if total_delta_v > available {
            return (
                format!(
                    "EXCEPTION of type 'ValueError' occurred with message: Planned maneuvers require {}m/s of delta-v but only {}m/s is available. Cannot comply",
                    pyfloat(total_delta_v),
                    pyfloat(available),
                ),
                false,
            );
        }

        let batch: Vec<(u64, f64)> = self
            .queue
            .iter()
            .filter(|q| !q.scheduled)
            .map(|q| (q.id, q.node.ut))
            .collect();
        let mut message = format!("Executing {} maneuver node(s).", batch.len());
        if !batch.is_empty() {
            let mut last_fire = self.clock;
            for &(node_id, ut) in &batch {
                last_fire = last_fire.max(ut.max(self.clock));
                self.schedule(ut, EventKind::Burn { node_id });
            }
            for queued in &mut self.queue {
                queued.scheduled = true;
            }
            self.schedule(last_fire, EventKind::AutopilotComplete);
            self.autopilot_on = true;
            message.push_str(
                " Notification will be raised upon completion of all scheduled maneuvers.",
            );
        }
        (message, true)
    }

    fn add_alarm_command(&mut self, name: &str, time_text: &str, desc: &str) -> (String, bool) {
        let Some(time) = parse_alarm_time(time_text) else {
            return (
                format!("Invalid time format '{time_text}'. Must be YYYY-MM-DDTHH:MM:SS."),
                false,
            );
        };
        let alarm = Alarm {
            id: self.new_alarm_id(),
            name: name.to_string(),
            description: desc.to_string(),
            time,
        };
        let creation = format!("New alarm created:\n{}", json_block(&alarm_json(&alarm)));
        if time <= self.clock {
            // Already due: the trigger rides along in the same observation,
            // stamped with the session clock.
            let trigger = alarm_trigger_text(&alarm, self.clock);
            (format!("{creation}{trigger}"), false)
        } else {
            self.pending_alarms.push(alarm.clone());
            self.schedule(time, EventKind::AlarmTrigger(alarm));
            (creation, false)
        }
    }

    fn add_apsis_alarm(&mut self, name: &str, desc: &str, periapsis: bool) -> (String, bool) {
        let wait = if periapsis {
            self.vessel.orbit.time_to_periapsis(self.clock)
        } else {
            self.vessel.orbit.time_to_apoapsis(self.clock)
        };
        let alarm = Alarm {
            id: self.new_alarm_id(),
            name: name.to_string(),
            description: desc.to_string(),
            time: self.clock + wait,
        };
        let creation = format!("New alarm created:\n{}", json_block(&alarm_json(&alarm)));
        self.pending_alarms.push(alarm.clone());
        self.schedule(alarm.time, EventKind::AlarmTrigger(alarm));
        (creation, false)
    }

    fn run_experiment_command(&mut self, name: &str) -> (String, bool) {
        if self.vessel.experiment(name).is_none() {
            return (
                format!("No experiment found with the name '{name}'."),
                false,
            );
        }
        let value = EXPERIMENT_READINGS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .unwrap_or("0.0");
        let state = self.vessel.orbit.state_at(self.clock);
        let record = ExperimentRecord {
            timestamp: iso_compact(self.clock),
            value: value.to_string(),
            altitude: state.radius - self.vessel.orbit.body.radius,
            body: self.vessel.orbit.body.name.clone(),
            inclination_degrees: self.vessel.orbit.inclination.to_degrees(),
        };
        self.experiment_records.push(record.clone());
        (
            format!(
                "Running experiment {name}...\n{}",
                json_block(&record)
            ),
            false,
        )
    }

    fn set_task_status_command(
        &mut self,
        cmd: &'static CommandSpec,
        raw_id: &str,
        raw_status: &str,
    ) -> (String, bool) {
        let ordinal: usize = match raw_id.parse() {
            Ok(v) => v,
            Err(_) => {
                return (
                    usage_error_message(
                        cmd,
                        &format!("argument -id: invalid int value: '{raw_id}'"),
                    ),
                    false,
                )
            }
        };
        let Some(status) = TaskStatus::parse(raw_status) else {
            return (
                usage_error_message(
                    cmd,
                    &format!(
                        "argument -status: invalid choice: '{raw_status}' (choose from 'pending', 'in_progress', 'done')"
                    ),
                ),
                false,
            );
        };
        match self.tasks.iter_mut().find(|t| t.ordinal == ordinal) {
            Some(task) => {
                task.status = status;
                (
                    format!("Task {ordinal} status set to {}", status.as_str()),
                    false,
                )
            }
            None => (format!("Error: no task with id {ordinal}"), false),
        }
    }

    fn task_plan_body(&self) -> String {
        if self.tasks.is_empty() {
            return "{}".to_string();
        }
        let mut map = Map::new();
        for task in &self.tasks {
            let mut entry = Map::new();
            entry.insert("name".into(), Value::String(task.name.clone()));
            entry.insert(
                "description".into(),
                Value::String(task.description.clone()),
            );
            entry.insert(
                "status".into(),
                Value::String(task.status.as_str().to_string()),
            );
            map.insert(task.ordinal.to_string(), Value::Object(entry));
        }
        json_block(&Value::Object(map))
    }

    fn properties_document(&self) -> Value {
        let mut map = Map::new();
        map.insert("name".into(), Value::String(self.vessel.name.clone()));
        map.insert(
            "situation".into(),
            Value::String(self.vessel.situation.clone()),
        );
        map.insert("mass".into(), number(self.vessel.total_mass()));
        map.insert("dry_mass".into(), number(self.vessel.dry_mass));
        map.insert(
            "available_thrust".into(),
            number(self.vessel.engine.thrust),
        );
        map.insert(
            "specific_impulse".into(),
            number(self.vessel.engine.isp),
        );
        map.insert(
            "moment_of_inertia".into(),
            Value::Array(
                self.vessel
                    .moment_of_inertia
                    .iter()
                    .map(|&v| number(v))
                    .collect(),
            ),
        );
        Value::Object(map)
    }

    fn resource_rows(&self) -> Vec<ResourceRow> {
        self.vessel
            .tanks
            .iter()
            .map(|t| ResourceRow {
                name: t.name.clone(),
                amount: t.amount,
                max: t.max,
            })
            .collect()
    }
}

enum PlanKind {
    Periapsis,
    Apoapsis,
    Inclination,
}

fn number(v: f64) -> Value {
    Value::Number(Number::from_f64(v).expect("finite quantity"))
}

fn alarm_json(alarm: &Alarm) -> Value {
    let mut map = Map::new();
    map.insert("id".into(), Value::String(alarm.id.clone()));
    map.insert("name".into(), Value::String(alarm.name.clone()));
    map.insert(
        "description".into(),
        Value::String(alarm.description.clone()),
    );
    map.insert("time".into(), Value::String(iso_compact(alarm.time)));
    Value::Object(map)
}

fn alarm_trigger_text(alarm: &Alarm, stamp: f64) -> String {
    format!(
        "{}::AlarmManager:: Alarm triggered:\n{}",
        human_clock(stamp),
        json_block(&alarm_json(alarm))
    )
}

/// The orbit document rendered by `get_orbit` and embedded in node JSON.
///
/// `speed_override` pins the reported `orbital_speed` (node documents render
/// it as zero, a quirk of the reference console preserved here).
fn orbit_document(orbit: &KeplerOrbit, at: f64, speed_override: Option<f64>) -> Value {
    let state = orbit.state_at(at);
    let period = orbit.period();
    // Time-to-apsis fields report zero when sitting exactly on the apsis,
    // unlike the scheduler's "next pass" convention.
    let tta = orbit.time_to_apoapsis(at) % period;
    let ttp = orbit.time_to_periapsis(at) % period;
    let mut map = Map::new();
    map.insert("body".into(), Value::String(orbit.body.name.clone()));
    map.insert("apoapsis_altitude".into(), number(orbit.apoapsis_altitude()));
    map.insert(
        "periapsis_altitude".into(),
        number(orbit.periapsis_altitude()),
    );
    map.insert(
        "current_altitude".into(),
        number(state.radius - orbit.body.radius),
    );
    map.insert("period".into(), number(period));
    map.insert("time_to_apoapsis".into(), number(tta));
    map.insert("time_to_periapsis".into(), number(ttp));
    map.insert("inclination".into(), number(orbit.inclination.to_degrees()));
    map.insert(
        "longitude_of_ascending_node".into(),
        number(orbit.longitude_of_ascending_node.to_degrees()),
    );
    map.insert(
        "argument_of_periapsis".into(),
        number(orbit.argument_of_periapsis.to_degrees()),
    );
    map.insert("epoch".into(), number(at));
    map.insert(
        "orbital_speed".into(),
        number(speed_override.unwrap_or(state.speed)),
    );
    map.insert("time_to_soi_change".into(), Value::Null);
    map.insert("next_orbit".into(), Value::Null);
    Value::Object(map)
}

/// Maneuver-node document: burn components, magnitude, burn time, and the
/// predicted orbit evaluated at the burn instant.
fn node_document(node: &ManeuverNode, now: f64) -> Value {
    let mut map = Map::new();
    map.insert("prograde".into(), number(node.prograde));
    map.insert("normal".into(), number(node.normal));
    map.insert("radial".into(), number(node.radial));
    map.insert("delta_v".into(), number(node.delta_v()));
    map.insert("remaining_delta_v".into(), number(node.delta_v()));
    map.insert("ut".into(), Value::String(iso_compact(node.ut)));
    map.insert("time_to".into(), number(node.ut - now));
    map.insert(
        "orbit".into(),
        orbit_document(&node.predicted, node.ut, Some(0.0)),
    );
    Value::Object(map)
}
