//! Deterministic spacecraft console simulator: a single-vessel
//! discrete-event world exposing seven operations services behind an
//! argparse-style command shell, with a virtual clock, alarm scheduler,
//! maneuver planning and execution, resource accounting, and journals.

pub mod console;
pub mod render;
pub mod session;
pub mod time;
pub mod vessel;

pub use console::{
    find_command, render_command_listing, usage_line, CommandSpec, COMMANDS,
};
pub use session::{
    Alarm, ConsoleReply, Deadlock, SentMessage, Session, SessionConfig, Task, TaskStatus,
    BOOT_OFFSET, DEFAULT_LATENCY, SCENARIO_START_UT,
};
pub use vessel::{Engine, ExperimentDef, ExperimentRecord, ResourceTank, Vessel};
