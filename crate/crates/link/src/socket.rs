//! TCP carrier: one console server owning the session, one blocking
//! client. Frames are newline-delimited JSON (see [`crate::frame`]).
//!
//! Protocol, in order:
//! - The first client frame must be `connect`; the reply is a `response`
//!   whose payload is the dashboard, or a `disconnect` refusal when
//!   another agent is already attached.
//! - `request` frames carry command lines and receive exactly one
//!   `response` with the observation payload. Request seqs must be
//!   strictly increasing — a stale or reused seq is answered with a
//!   protocol-error `response` (seq 0) and the connection stays up.
//! - A `request` whose payload is [`crate::AWAIT_COMMAND`] sleeps the
//!   console: the response closes the pair, then a single `notification`
//!   (seq 0) delivers the event payload — or the response itself carries
//!   [`crate::DEADLOCK_PAYLOAD`] when no event is scheduled.
//! - `disconnect` detaches; the console keeps running and a later
//!   `connect` is served a fresh dashboard.

use std::io::{BufRead, BufReader, ErrorKind, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::{self, JoinHandle};
use std::time::Duration;

use llmsat_sim::{ConsoleReply, Session};

use crate::frame::{Frame, FrameKind};
use crate::{ConsoleLink, LinkError, AWAIT_COMMAND, DEADLOCK_PAYLOAD};

const POLL_INTERVAL: Duration = Duration::from_millis(10);
const HANDLER_READ_TIMEOUT: Duration = Duration::from_millis(50);

/// Background console server. Owns the session for its lifetime and hands
/// it back on [`ConsoleServer::shutdown`] so a harness can evaluate the
/// final world state.
pub struct ConsoleServer {
    addr: SocketAddr,
    session: Arc<Mutex<Session>>,
    stop: Arc<AtomicBool>,
    accept_thread: Option<JoinHandle<()>>,
}

impl ConsoleServer {
    /// Bind `addr` (e.g. "127.0.0.1:0" for an ephemeral port) and serve
    /// the session until shutdown.
    pub fn spawn(session: Session, addr: impl ToSocketAddrs) -> std::io::Result<ConsoleServer> {
        let listener = TcpListener::bind(addr)?;
        listener.set_nonblocking(true)?;
        let addr = listener.local_addr()?;
        let session = Arc::new(Mutex::new(session));
        let stop = Arc::new(AtomicBool::new(false));
        let accept_thread = {
            let session = Arc::clone(&session);
            let stop = Arc::clone(&stop);
            thread::spawn(move || accept_loop(listener, session, stop))
        };
        Ok(ConsoleServer { addr, session, stop, accept_thread: Some(accept_thread) })
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// Stop serving and return the session for post-run inspection.
    pub fn shutdown(mut self) -> Session {
        self.stop.store(true, Ordering::SeqCst);
        if let Some(handle) = self.accept_thread.take() {
            let _ = handle.join();
        }
        let session = Arc::clone(&self.session);
        drop(self);
        Arc::try_unwrap(session)
            .ok()
            .expect("all server threads joined")
            .into_inner()
            .expect("session mutex not poisoned")
    }
}

impl Drop for ConsoleServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        if let Some(handle) = self.accept_thread.take() {
            let _ = handle.join();
        }
    }
}

fn accept_loop(listener: TcpListener, session: Arc<Mutex<Session>>, stop: Arc<AtomicBool>) {
    let attached = Arc::new(AtomicBool::new(false));
    let mut handlers: Vec<JoinHandle<()>> = Vec::new();
    while !stop.load(Ordering::SeqCst) {
        match listener.accept() {
            Ok((stream, _peer)) => {
                let session = Arc::clone(&session);
                let attached = Arc::clone(&attached);
                let stop = Arc::clone(&stop);
                handlers.push(thread::spawn(move || {
                    handle_client(stream, session, attached, stop)
                }));
            }
            Err(e) if e.kind() == ErrorKind::WouldBlock => thread::sleep(POLL_INTERVAL),
            Err(_) => break,
        }
        handlers.retain(|h| !h.is_finished());
    }
    for handle in handlers {
        let _ = handle.join();
    }
}

/// Outcome of one blocking framed read.
enum Read {
    Frame(Frame),
    Malformed(String),
    Eof,
    Stopped,
}

fn read_frame(reader: &mut BufReader<TcpStream>, stop: &AtomicBool) -> Read {
    let mut line = String::new();
    loop {
        match reader.read_line(&mut line) {
            Ok(0) => {
                return if line.is_empty() {
                    Read::Eof
                } else {
                    Read::Malformed("truncated frame at end of stream".to_string())
                };
            }
            Ok(_) => {
                return match Frame::decode(&line) {
                    Ok(frame) => Read::Frame(frame),
                    Err(reason) => Read::Malformed(reason),
                };
            }
            Err(e) if matches!(e.kind(), ErrorKind::WouldBlock | ErrorKind::TimedOut) => {
                if stop.load(Ordering::SeqCst) {
                    return Read::Stopped;
                }
            }
            Err(e) if e.kind() == ErrorKind::Interrupted => {}
            Err(_) => return Read::Eof,
        }
    }
}

fn send(writer: &mut TcpStream, frame: &Frame) -> bool {
    writer.write_all(frame.encode().as_bytes()).and_then(|()| writer.flush()).is_ok()
}

fn protocol_error(writer: &mut TcpStream, reason: &str) -> bool {
    send(writer, &Frame::response(0, format!("protocol error: {reason}")))
}

fn handle_client(
    stream: TcpStream,
    session: Arc<Mutex<Session>>,
    attached: Arc<AtomicBool>,
    stop: Arc<AtomicBool>,
) {
    if stream.set_read_timeout(Some(HANDLER_READ_TIMEOUT)).is_err() {
        return;
    }
    let mut writer = match stream.try_clone() {
        Ok(w) => w,
        Err(_) => return,
    };
    let mut reader = BufReader::new(stream);

    // Attachment handshake: the first frame must be a connect.
    let connect_seq = match read_frame(&mut reader, &stop) {
        Read::Frame(Frame { kind: FrameKind::Connect, seq, .. }) => seq,
        Read::Frame(_) => {
            protocol_error(&mut writer, "expected a connect frame first");
            return;
        }
        Read::Malformed(reason) => {
            protocol_error(&mut writer, &reason);
            return;
        }
        Read::Eof | Read::Stopped => return,
    };
    if attached.swap(true, Ordering::SeqCst) {
        send(
            &mut writer,
            &Frame::disconnect(
                connect_seq,
                "connection refused: another agent is already attached",
            ),
        );
        return;
    }
    let dashboard = session.lock().expect("session lock").render_dashboard();
    if !send(&mut writer, &Frame::response(connect_seq, dashboard)) {
        attached.store(false, Ordering::SeqCst);
        return;
    }

    let mut last_seq = connect_seq;
    loop {
        match read_frame(&mut reader, &stop) {
            Read::Frame(frame) => match frame.kind {
                FrameKind::Disconnect => break,
                FrameKind::Connect => {
                    if !protocol_error(&mut writer, "already connected") {
                        break;
                    }
                }
                FrameKind::Response | FrameKind::Notification => {
                    if !protocol_error(&mut writer, "unexpected console-bound frame kind") {
                        break;
                    }
                }
                FrameKind::Request => {
                    if frame.seq <= last_seq {
                        let reason = format!(
                            "request seq {} is not greater than {last_seq}; one request in flight",
                            frame.seq
                        );
                        if !protocol_error(&mut writer, &reason) {
                            break;
                        }
                        continue;
                    }
                    last_seq = frame.seq;
                    if frame.payload == AWAIT_COMMAND {
                        let woke = session.lock().expect("session lock").await_event();
                        let ok = match woke {
                            Ok(event) => {
                                send(&mut writer, &Frame::response(frame.seq, ""))
                                    && send(&mut writer, &Frame::notification(event))
                            }
                            Err(_) => {
                                send(&mut writer, &Frame::response(frame.seq, DEADLOCK_PAYLOAD))
                            }
                        };
                        if !ok {
                            break;
                        }
                    } else {
                        let reply =
                            session.lock().expect("session lock").execute_command(&frame.payload);
                        match reply {
                            ConsoleReply::Text(text) => {
                                if !send(&mut writer, &Frame::response(frame.seq, text)) {
                                    break;
                                }
                            }
                            ConsoleReply::Quit => {
                                send(&mut writer, &Frame::response(frame.seq, ""));
                                send(
                                    &mut writer,
                                    &Frame::disconnect(frame.seq, "console session ended"),
                                );
                                break;
                            }
                        }
                    }
                }
            },
            Read::Malformed(reason) => {
                // Framing violation: report it and keep the connection.
                if !protocol_error(&mut writer, &reason) {
                    break;
                }
            }
            Read::Eof | Read::Stopped => break,
        }
    }
    attached.store(false, Ordering::SeqCst);
}

/// Blocking client side of the socket carrier.
pub struct SocketClient {
    reader: BufReader<TcpStream>,
    writer: TcpStream,
    next_seq: u64,
    connected: bool,
}

impl SocketClient {
    /// Open the TCP stream (the protocol-level connect happens in
    /// [`ConsoleLink::connect`]).
    pub fn open(addr: impl ToSocketAddrs) -> Result<SocketClient, LinkError> {
        let writer = TcpStream::connect(addr).map_err(|e| LinkError::Io(e.to_string()))?;
        let reader = BufReader::new(writer.try_clone().map_err(|e| LinkError::Io(e.to_string()))?);
        Ok(SocketClient { reader, writer, next_seq: 1, connected: false })
    }

    fn send(&mut self, frame: &Frame) -> Result<(), LinkError> {
        self.writer
            .write_all(frame.encode().as_bytes())
            .and_then(|()| self.writer.flush())
            .map_err(|e| LinkError::Io(e.to_string()))
    }

    fn read(&mut self) -> Result<Frame, LinkError> {
        let mut line = String::new();
        loop {
            match self.reader.read_line(&mut line) {
                Ok(0) => {
                    self.connected = false;
                    return Err(LinkError::Closed);
                }
                Ok(_) => {
                    return Frame::decode(&line).map_err(LinkError::Protocol);
                }
                Err(e) if e.kind() == ErrorKind::Interrupted => {}
                Err(e) if matches!(e.kind(), ErrorKind::WouldBlock | ErrorKind::TimedOut) => {
                    return Err(LinkError::Io("timed out waiting for a frame".to_string()));
                }
                Err(e) => {
                    self.connected = false;
                    return Err(LinkError::Io(e.to_string()));
                }
            }
        }
    }

    fn take_seq(&mut self) -> u64 {
        let seq = self.next_seq;
        self.next_seq += 1;
        seq
    }

    /// Reply to `seq`: a matching response's payload, or the error the
    /// console signaled instead.
    fn read_reply(&mut self, seq: u64) -> Result<String, LinkError> {
        match self.read()? {
            Frame { kind: FrameKind::Response, seq: reply_seq, payload } if reply_seq == seq => {
                Ok(payload)
            }
            Frame { kind: FrameKind::Response, seq: 0, payload } => {
                Err(LinkError::Protocol(
                    payload.strip_prefix("protocol error: ").unwrap_or(&payload).to_string(),
                ))
            }
            Frame { kind: FrameKind::Disconnect, payload, .. } => {
                self.connected = false;
                if payload.starts_with("connection refused") {
                    Err(LinkError::Refused(payload))
                } else {
                    Err(LinkError::Closed)
                }
            }
            other => Err(LinkError::Protocol(format!(
                "expected a response to seq {seq}, got a {:?} frame",
                other.kind
            ))),
        }
    }
}

impl ConsoleLink for SocketClient {
    fn connect(&mut self) -> Result<String, LinkError> {
        let seq = self.take_seq();
        self.send(&Frame::connect(seq))?;
        let dashboard = self.read_reply(seq)?;
        self.connected = true;
        Ok(dashboard)
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
        let seq = self.take_seq();
        self.send(&Frame::request(seq, line))?;
        self.read_reply(seq)
    }

    fn await_event(&mut self, timeout: Option<Duration>) -> Result<String, LinkError> {
        if !self.connected {
            return Err(LinkError::Closed);
        }
        let stream = self.reader.get_ref();
        stream.set_read_timeout(timeout).map_err(|e| LinkError::Io(e.to_string()))?;
        let seq = self.take_seq();
        let result = (|| {
            self.send(&Frame::request(seq, AWAIT_COMMAND))?;
            let ack = self.read_reply(seq)?;
            if ack == DEADLOCK_PAYLOAD {
                return Err(LinkError::Deadlock);
            }
            match self.read()? {
                Frame { kind: FrameKind::Notification, payload, .. } => Ok(payload),
                other => Err(LinkError::Protocol(format!(
                    "expected a notification after the await response, got {:?}",
                    other.kind
                ))),
            }
        })();
        let _ = self.reader.get_ref().set_read_timeout(None);
        result
    }

    fn disconnect(&mut self) -> Result<(), LinkError> {
        if self.connected {
            let seq = self.take_seq();
            self.send(&Frame::disconnect(seq, ""))?;
            self.connected = false;
        }
        Ok(())
    }
}
