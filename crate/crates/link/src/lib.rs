//! Console ↔ agent wire protocol: request/response plus asynchronous
//! notifications, with two interchangeable carriers — an in-process
//! loopback and a newline-delimited-JSON TCP socket. Both expose the same
//! four-operation contract, and running the same command sequence over
//! either carrier yields byte-identical payloads.

pub mod frame;
pub mod socket;

pub use frame::{Frame, FrameKind};
pub use socket::{ConsoleServer, SocketClient};

use std::time::Duration;

use llmsat_sim::{ConsoleReply, Session};

/// Reserved request payload that asks the console to sleep until the next
/// scheduled event instead of executing a command line.
pub const AWAIT_COMMAND: &str = "::await::";

/// Response payload to an await request when the event queue is empty:
/// sleeping would never wake, so no notification will follow.
pub const DEADLOCK_PAYLOAD: &str = "::deadlock::";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinkError {
    /// Sleeping with no scheduled future event; the run has failed.
    #[error("no future events are scheduled; sleeping now would never wake")]
    Deadlock,
    /// The console refused the connection (another agent is attached).
    #[error("{0}")]
    Refused(String),
    /// The link is not connected (never connected, or already closed).
    #[error("link closed")]
    Closed,
    /// The peer violated the framing contract.
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

/// The agent's view of the console: connect for the dashboard, request
/// command lines, sleep for notifications, disconnect when done.
///
/// One request is in flight at a time — the synchronous `&mut self`
/// methods make pipelining unrepresentable on this side of the wire.
pub trait ConsoleLink {
    /// Attach to the console; the reply payload is the dashboard text.
    fn connect(&mut self) -> Result<String, LinkError>;
    /// Run one command line and return its observation payload.
    fn request(&mut self, line: &str) -> Result<String, LinkError>;
    /// Sleep until the next notification (alarm trigger or autopilot
    /// completion). The simulated clock jumps to the event time.
    fn await_event(&mut self, timeout: Option<Duration>) -> Result<String, LinkError>;
    /// Detach; the console keeps running and accepts a fresh connect.
    fn disconnect(&mut self) -> Result<(), LinkError>;
}

/// In-process carrier: the same contract as the socket with no wire in
/// between. Owns the session; hand it back with [`LoopbackLink::into_session`]
/// for post-run evaluation.
pub struct LoopbackLink {
    session: Session,
    connected: bool,
}

impl LoopbackLink {
    pub fn new(session: Session) -> LoopbackLink {
        LoopbackLink { session, connected: false }
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    pub fn into_session(self) -> Session {
        self.session
    }
}

impl ConsoleLink for LoopbackLink {
    fn connect(&mut self) -> Result<String, LinkError> {
        if self.connected {
            return Err(LinkError::Refused(
                "connection refused: another agent is already attached".to_string(),
            ));
        }
        self.connected = true;
        Ok(self.session.render_dashboard())
    }

    fn request(&mut self, line: &str) -> Result<String, LinkError> {
        if !self.connected {
            return Err(LinkError::Closed);
        }
        if line == AWAIT_COMMAND {
            return Err(LinkError::Protocol(format!(
                "'{AWAIT_COMMAND}' is reserved for await_event"
            )));
        }
        match self.session.execute_command(line) {
            ConsoleReply::Text(text) => Ok(text),
            ConsoleReply::Quit => {
                self.connected = false;
                Ok(String::new())
            }
        }
    }

    fn await_event(&mut self, _timeout: Option<Duration>) -> Result<String, LinkError> {
        if !self.connected {
            return Err(LinkError::Closed);
        }
        self.session.await_event().map_err(|_| LinkError::Deadlock)
    }

    fn disconnect(&mut self) -> Result<(), LinkError> {
        self.connected = false;
        Ok(())
    }
}
