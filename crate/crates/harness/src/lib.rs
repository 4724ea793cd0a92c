//! Mission benchmark harness: scenario definitions, automated success
//! evaluators, an isolated-world batch runner, and report emission in the
//! Run / Result / Tokens / Observations schema.

pub mod batch;
pub mod cli;
pub mod evaluate;
pub mod report;
pub mod scenario;

pub use batch::{
    bundled_policy, bundled_replay, derive_run_seed, run_batch, run_one,
    BackendKind, BatchError, BatchOutcome, BatchSettings, CompletedRun,
    RunResult,
};
pub use cli::{resolve_settings, Cli, ConfigFile};
pub use evaluate::{evaluate, Evaluation};
pub use report::BatchReport;
pub use scenario::ScenarioId;
