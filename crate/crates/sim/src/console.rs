//! Command registry, argument parsing, usage errors, and the help listing.
//!
//! The console mimics a Python `argparse`-backed shell: each command declares
//! required and optional flags, errors render as a usage line followed by an
//! `Error:` line, and the help listing groups commands by service with
//! two-space-padded columns.

use std::collections::HashMap;

/// One command-line flag: the literal flag token and its placeholder name.
#[derive(Clone, Copy, Debug)]
pub struct ArgSpec {
    pub flag: &'static str,
    pub metavar: &'static str,
}

/// A registered console command.
#[derive(Clone, Copy, Debug)]
pub struct CommandSpec {
    pub name: &'static str,
    pub service: &'static str,
    pub summary: &'static str,
    pub required: &'static [ArgSpec],
    pub optional: &'static [ArgSpec],
}

const NO_ARGS: &[ArgSpec] = &[];

/// Service section order in the help listing: alphabetical, built-ins last.
pub const SERVICE_ORDER: &[&str] = &[
    "AlarmManager",
    "AutopilotService",
    "CommunicationService",
    "ExperimentManager",
    "OrbitPropagator",
    "SpacecraftManager",
    "TaskManager",
    "Built-in Commands",
];

/// The complete command registry: 26 commands across seven services plus
/// the built-ins.
pub const COMMANDS: &[CommandSpec] = &[
    CommandSpec {
        name: "add_alarm",
        service: "AlarmManager",
        summary: "Create a new alarm to trigger at a specified time",
        required: &[
            ArgSpec { flag: "-name", metavar: "NAME" },
            ArgSpec { flag: "-time", metavar: "TIME" },
        ],
        optional: &[ArgSpec { flag: "-desc", metavar: "DESC" }],
    },
    CommandSpec {
        name: "add_alarm_at_apoapsis",
        service: "AlarmManager",
        summary: "Create a new alarm to trigger at apoapsis",
        required: &[ArgSpec { flag: "-name", metavar: "NAME" }],
        optional: &[ArgSpec { flag: "-desc", metavar: "DESC" }],
    },
    CommandSpec {
        name: "add_alarm_at_periapsis",
        service: "AlarmManager",
        summary: "Create a new alarm to trigger at periapsis",
        required: &[ArgSpec { flag: "-name", metavar: "NAME" }],
        optional: &[ArgSpec { flag: "-desc", metavar: "DESC" }],
    },
    CommandSpec {
        name: "get_alarms",
        service: "AlarmManager",
        summary: "Get all alarms",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "check_autopilot_status",
        service: "AutopilotService",
        summary: "Check the status of the autopilot.",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "execute_maneuver_nodes",
        service: "AutopilotService",
        summary: "Execute all planned maneuver nodes",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "get_nodes",
        service: "AutopilotService",
        summary: "Returns a list of all existing maneuver nodes, ordered by time from first to last.",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "operation_apoapsis",
        service: "AutopilotService",
        summary: "Create a maneuver to set a new apoapsis",
        required: &[ArgSpec { flag: "--new_apoapsis", metavar: "NEW_APOAPSIS" }],
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "operation_inclination",
        service: "AutopilotService",
        summary: "Create a maneuver to change inclination",
        required: &[ArgSpec { flag: "--new_inclination", metavar: "NEW_INCLINATION" }],
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "operation_periapsis",
        service: "AutopilotService",
        summary: "Create a maneuver to set a new periapsis",
        required: &[ArgSpec { flag: "--new_periapsis", metavar: "NEW_PERIAPSIS" }],
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "remove_nodes",
        service: "AutopilotService",
        summary: "Remove all maneuver nodes",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "send_message",
        service: "CommunicationService",
        summary: "Send a message to mission control",
        required: &[ArgSpec { flag: "-message", metavar: "MESSAGE" }],
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "get_experiments",
        service: "ExperimentManager",
        summary: "Get a dictionary of all onboard scientific experiments",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "run_experiment",
        service: "ExperimentManager",
        summary: "Run a given experiment to acquire data.",
        required: &[ArgSpec { flag: "-name", metavar: "NAME" }],
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "get_orbit",
        service: "OrbitPropagator",
        summary: "The current orbit of the vessel.",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "get_met",
        service: "SpacecraftManager",
        summary: "Get the mission elapsed time",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "get_parts_tree",
        service: "SpacecraftManager",
        summary: "Get a tree of all spacecraft parts.",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "get_resources",
        service: "SpacecraftManager",
        summary: "",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "get_spacecraft_properties",
        service: "SpacecraftManager",
        summary: "Get information about the spacecraft",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "get_ut",
        service: "SpacecraftManager",
        summary: "Get the current universal time",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "read_mission_brief",
        service: "SpacecraftManager",
        summary: "Read the mission briefing",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "add_task",
        service: "TaskManager",
        summary: "Add a new task",
        required: &[ArgSpec { flag: "-name", metavar: "NAME" }],
        optional: &[ArgSpec { flag: "-desc", metavar: "DESC" }],
    },
    CommandSpec {
        name: "read_tasks",
        service: "TaskManager",
        summary: "Read existing tasks",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "set_task_status",
        service: "TaskManager",
        summary: "Set a task's status",
        required: &[
            ArgSpec { flag: "-id", metavar: "ID" },
            ArgSpec { flag: "-status", metavar: "STATUS" },
        ],
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "help",
        service: "Built-in Commands",
        summary: "List available commands or provide detailed help for a specific command",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
    CommandSpec {
        name: "quit",
        service: "Built-in Commands",
        summary: "Exit this application",
        required: NO_ARGS,
        optional: NO_ARGS,
    },
];

pub fn find_command(name: &str) -> Option<&'static CommandSpec> {
    COMMANDS.iter().find(|c| c.name == name)
}

/// The one-line usage synopsis shown by errors and `help <topic>`:
/// required flags first, then `[-h]`, then optional flags in brackets.
pub fn usage_line(cmd: &CommandSpec) -> String {
    let mut line = format!("Usage: {}", cmd.name);
    for arg in cmd.required {
        line.push_str(&format!(" {} {}", arg.flag, arg.metavar));
    }
    line.push_str(" [-h]");
    for arg in cmd.optional {
        line.push_str(&format!(" [{} {}]", arg.flag, arg.metavar));
    }
    line
}

/// Two-line usage-error text: the usage synopsis, a blank line, then the error.
pub fn usage_error_message(cmd: &CommandSpec, error: &str) -> String {
    format!("{}\n\nError: {}", usage_line(cmd), error)
}

/// Split a command line into tokens, honoring single- and double-quoted
/// spans so multi-word arguments stay together.
pub fn tokenize(line: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut quote: Option<char> = None;
    let mut in_token = false;
    for ch in line.chars() {
        match quote {
            Some(q) => {
                if ch == q {
                    quote = None;
                } else {
                    current.push(ch);
                }
            }
            None => {
                if ch == '\'' || ch == '"' {
                    quote = Some(ch);
                    in_token = true;
                } else if ch.is_whitespace() {
                    if in_token {
                        tokens.push(std::mem::take(&mut current));
                        in_token = false;
                    }
                } else {
                    current.push(ch);
                    in_token = true;
                }
            }
        }
    }
    if in_token {
        tokens.push(current);
    }
    tokens
}

/// Flag keys with leading dashes stripped, e.g. `--new_periapsis` → `new_periapsis`.
fn key_of(flag: &str) -> &str {
    flag.trim_start_matches('-')
}

/// Result of parsing the arguments of a recognized command.
#[derive(Clone, Debug, PartialEq)]
pub enum ParsedArgs {
    /// `-h`/`--help` was present: show detailed help, run nothing.
    Help,
    /// All required flags present; map is keyed by flag name without dashes.
    Values(HashMap<String, String>),
}

/// Parse the tokens following the command name against its spec.
///
/// Error precedence follows the reference shell: missing required flags are
/// reported before unrecognized extra tokens.
pub fn parse_args(cmd: &CommandSpec, tokens: &[String]) -> Result<ParsedArgs, String> {
    let mut values: HashMap<String, String> = HashMap::new();
    let mut extras: Vec<String> = Vec::new();
    let mut want_help = false;
    let known = |flag: &str| -> Option<&'static ArgSpec> {
        cmd.required
            .iter()
            .chain(cmd.optional.iter())
            .find(|a| a.flag == flag)
    };
    let mut i = 0;
    while i < tokens.len() {
        let tok = &tokens[i];
        if tok == "-h" || tok == "--help" {
            want_help = true;
            i += 1;
            continue;
        }
        if let Some(arg) = known(tok) {
            if i + 1 < tokens.len() {
                values.insert(key_of(arg.flag).to_string(), tokens[i + 1].clone());
                i += 2;
            } else {
                return Err(usage_error_message(
                    cmd,
                    &format!("argument {}: expected one argument", arg.flag),
                ));
            }
        } else {
            extras.push(tok.clone());
            i += 1;
        }
    }
    if want_help {
        return Ok(ParsedArgs::Help);
    }
    let missing: Vec<&str> = cmd
        .required
        .iter()
        .filter(|a| !values.contains_key(key_of(a.flag)))
        .map(|a| a.flag)
        .collect();
    if !missing.is_empty() {
        return Err(usage_error_message(
            cmd,
            &format!("the following arguments are required: {}", missing.join(", ")),
        ));
    }
    if !extras.is_empty() {
        return Err(usage_error_message(
            cmd,
            &format!("unrecognized arguments: {}", extras.join(" ")),
        ));
    }
    Ok(ParsedArgs::Values(values))
}

/// Total width (name column + summary) at which listing rows wrap.
const LISTING_WRAP_WIDTH: usize = 100;
/// Name columns are at least this wide.
const MIN_NAME_COLUMN: usize = 22;
/// Section rule length under each service name.
const SECTION_RULE: usize = 66;

fn wrap_row(name: &str, summary: &str, column: usize) -> String {
    if summary.is_empty() {
        return name.to_string();
    }
    let budget = LISTING_WRAP_WIDTH - column;
    let mut chunks: Vec<String> = Vec::new();
    let mut content = String::new();
    for word in summary.split_whitespace() {
        if !content.is_empty() && content.chars().count() + 1 + word.chars().count() > budget {
            chunks.push(std::mem::take(&mut content));
        }
        if !content.is_empty() {
            content.push(' ');
        }
        content.push_str(word);
    }
    chunks.push(content);
    chunks
        .iter()
        .enumerate()
        .map(|(i, chunk)| {
            if i == 0 {
                format!("{:<column$}{}", name, chunk, column = column)
            } else {
                format!("{}{}", " ".repeat(column), chunk)
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// The grouped command listing embedded in the dashboard and shown by `help`.
pub fn render_command_listing() -> String {
    let mut sections: Vec<String> = Vec::new();
    for service in SERVICE_ORDER {
        let mut rows: Vec<&CommandSpec> =
            COMMANDS.iter().filter(|c| c.service == *service).collect();
        rows.sort_by_key(|c| c.name);
        if rows.is_empty() {
            continue;
        }
        let longest = rows.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let column = MIN_NAME_COLUMN.max(longest + 2);
        let mut out = format!("{}\n{}\n", service, "=".repeat(SECTION_RULE));
        for cmd in rows {
            out.push_str(&wrap_row(cmd.name, cmd.summary, column));
            out.push('\n');
        }
        sections.push(out.trim_end_matches('\n').to_string());
    }
    sections.join("\n\n")
}

/// Verbose listing (`help -v`): every command's usage synopsis grouped by
/// service.
pub fn render_command_listing_verbose() -> String {
    let mut sections: Vec<String> = Vec::new();
    for service in SERVICE_ORDER {
        let mut rows: Vec<&CommandSpec> =
            COMMANDS.iter().filter(|c| c.service == *service).collect();
        rows.sort_by_key(|c| c.name);
        if rows.is_empty() {
            continue;
        }
        let mut out = format!("{}\n{}\n", service, "=".repeat(SECTION_RULE));
        for cmd in rows {
            out.push_str(&usage_line(cmd)["Usage: ".len()..]);
            if !cmd.summary.is_empty() {
                out.push_str("\n    ");
                out.push_str(cmd.summary);
            }
            out.push('\n');
        }
        sections.push(out.trim_end_matches('\n').to_string());
    }
    sections.join("\n\n")
}

/// Detailed help for one command: usage synopsis plus its summary.
pub fn render_help_topic(cmd: &CommandSpec) -> String {
    if cmd.summary.is_empty() {
        usage_line(cmd)
    } else {
        format!("{}\n\n{}", usage_line(cmd), cmd.summary)
    }
}
