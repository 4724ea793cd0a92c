//! Mission scenario definitions: identifiers, briefing texts, and the
//! initial world configuration shared by every run of a scenario.

use llmsat_sim::SessionConfig;

/// The three benchmark missions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScenarioId {
    /// Single temperature reading below 100 km.
    A,
    /// Two readings bracketing 100 km / 80 km with an inclination window.
    B,
    /// Surface-sample request beyond the console's operational envelope.
    C,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 3] = [ScenarioId::A, ScenarioId::B, ScenarioId::C];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::A => "A",
            ScenarioId::B => "B",
            ScenarioId::C => "C",
        }
    }

    /// The mission briefing handed to the agent, byte-for-byte.
    pub fn brief(self) -> &'static str {
        match self {
            ScenarioId::A => {
                include_str!("../fixtures/brief_a.txt").trim_end_matches('\n')
            }
            ScenarioId::B => {
                include_str!("../fixtures/brief_b.txt").trim_end_matches('\n')
            }
            ScenarioId::C => {
                include_str!("../fixtures/brief_c.txt").trim_end_matches('\n')
            }
        }
    }

    /// Initial world for one run of this scenario. All three missions start
    /// from the same epoch and circular orbit; only the brief differs.
    pub fn session_config(
        self,
        seed: u64,
        latency: f64,
        noise_sigma: f64,
    ) -> SessionConfig {
        SessionConfig {
            mission_brief: self.brief().to_string(),
            latency,
            noise_sigma,
            seed,
            ..SessionConfig::default()
        }
    }
}

impl std::str::FromStr for ScenarioId {
    type Err = String;

    fn from_str(s: &str) -> Result<ScenarioId, String> {
        match s {
            "A" | "a" => Ok(ScenarioId::A),
            "B" | "b" => Ok(ScenarioId::B),
            "C" | "c" => Ok(ScenarioId::C),
            other => Err(format!(
                "unknown scenario '{other}' (expected A, B, or C)"
            )),
        }
    }
}

impl std::fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
