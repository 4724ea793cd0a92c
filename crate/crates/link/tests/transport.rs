//! Socket-carrier behavior and loopback/socket transparency.

use std::io::{BufRead, BufReader, Write};
use std::net::TcpStream;
use std::time::Duration;

use llmsat_link::{
    ConsoleLink, ConsoleServer, Frame, FrameKind, LinkError, LoopbackLink, SocketClient,
};
use llmsat_sim::{Session, SessionConfig};

fn fresh_session() -> Session {
    Session::new(SessionConfig::default())
}

/// The command sequence of a full mission pass, sleeps marked by `None`.
fn mission_script() -> Vec<Option<&'static str>> {
    vec![
        Some("get_orbit"),
        Some("operation_periapsis"),
        Some("operation_periapsis --new_periapsis 95000"),
        Some("execute_maneuver_nodes"),
        None,
        Some("get_orbit"),
        Some("add_alarm_at_periapsis -name PeriapsisTemperatureMeasurement"),
        None,
        Some("run_experiment -name 'Temperature Scan'"),
        Some("send_message -message 'Temperature at periapsis: 127.0K'"),
        Some("get_resources"),
        Some("check_autopilot_status"),
    ]
}

fn drive(link: &mut dyn ConsoleLink) -> Vec<String> {
    let mut payloads = vec![link.connect().unwrap()];
    for step in mission_script() {
        let payload = match step {
            Some(line) => link.request(line).unwrap(),
            None => link.await_event(Some(Duration::from_secs(5))).unwrap(),
        };
        payloads.push(payload);
    }
    link.disconnect().unwrap();
    payloads
}

#[test]
fn socket_and_loopback_payloads_are_byte_identical() {
    let mut loopback = LoopbackLink::new(fresh_session());
    let over_loopback = drive(&mut loopback);

    let server = ConsoleServer::spawn(fresh_session(), "127.0.0.1:0").unwrap();
    let mut client = SocketClient::open(server.addr()).unwrap();
    let over_socket = drive(&mut client);
    let session = server.shutdown();

    assert_eq!(over_loopback, over_socket);
    assert_eq!(session.messages().len(), 1);
    assert_eq!(session.experiment_records().len(), 1);
}

#[test]
fn second_concurrent_connect_is_refused() {
    let server = ConsoleServer::spawn(fresh_session(), "127.0.0.1:0").unwrap();
    let mut first = SocketClient::open(server.addr()).unwrap();
    first.connect().unwrap();

    let mut second = SocketClient::open(server.addr()).unwrap();
    match second.connect() {
        Err(LinkError::Refused(reason)) => {
            assert_eq!(reason, "connection refused: another agent is already attached")
        }
        other => panic!("expected refusal, got {other:?}"),
    }

    // The first attachment is unaffected, and once it detaches the
    // console accepts a fresh connect with an advanced clock.
    let before = first.request("get_ut").unwrap();
    first.disconnect().unwrap();
    let mut third = SocketClient::open(server.addr()).unwrap();
    // The server needs a beat to observe the disconnect frame.
    let dashboard = retry_connect(&mut third);
    assert!(dashboard.starts_with("SatelliteOS\nUT: "));
    let after = third.request("get_ut").unwrap();
    assert!(after > before, "clock advanced across attachments");
    server.shutdown();
}

fn retry_connect(client: &mut SocketClient) -> String {
    for _ in 0..100 {
        match client.connect() {
            Ok(dashboard) => return dashboard,
            Err(LinkError::Refused(_)) => std::thread::sleep(Duration::from_millis(10)),
            Err(other) => panic!("unexpected connect failure: {other:?}"),
        }
    }
    panic!("console never released the attachment");
}

#[test]
fn deadlock_surfaces_through_the_socket() {
    let server = ConsoleServer::spawn(fresh_session(), "127.0.0.1:0").unwrap();
    let mut client = SocketClient::open(server.addr()).unwrap();
    client.connect().unwrap();
    assert_eq!(
        client.await_event(Some(Duration::from_secs(5))),
        Err(LinkError::Deadlock)
    );
    // The link survives the failed sleep.
    assert!(client.request("get_met").unwrap().starts_with("T+ "));
    server.shutdown();
}

#[test]
fn notification_frames_carry_seq_zero_and_arrive_after_the_response() {
    let server = ConsoleServer::spawn(fresh_session(), "127.0.0.1:0").unwrap();
    let stream = TcpStream::connect(server.addr()).unwrap();
    let mut writer = stream.try_clone().unwrap();
    let mut reader = BufReader::new(stream);
    let mut line = String::new();

    let mut talk = |out: &mut TcpStream, frame: Frame, line: &mut String| -> Frame {
        out.write_all(frame.encode().as_bytes()).unwrap();
        line.clear();
        reader.read_line(line).unwrap();
        Frame::decode(line).unwrap()
    };

    let reply = talk(&mut writer, Frame::connect(1), &mut line);
    assert_eq!(reply.kind, FrameKind::Response);
    assert_eq!(reply.seq, 1);

    let reply = talk(
        &mut writer,
        Frame::request(2, "add_alarm -name Wake -time 2045-01-03T21:00:00"),
        &mut line,
    );
    assert_eq!(reply.seq, 2);
    assert!(reply.payload.starts_with("New alarm created:"));

    // Sleep: response first (closing the pair), then exactly one
    // notification with seq 0.
    let reply = talk(&mut writer, Frame::request(3, "::await::"), &mut line);
    assert_eq!((reply.kind, reply.seq, reply.payload.as_str()), (FrameKind::Response, 3, ""));
    line.clear();
    BufRead::read_line(&mut reader, &mut line).unwrap();
    let notification = Frame::decode(&line).unwrap();
    assert_eq!(notification.kind, FrameKind::Notification);
    assert_eq!(notification.seq, 0);
    assert!(notification.payload.contains("::AlarmManager:: Alarm triggered:\n"));
    server.shutdown();
}

#[test]
fn malformed_frames_get_an_error_and_preserve_the_connection() {
    let server = ConsoleServer::spawn(fresh_session(), "127.0.0.1:0").unwrap();
    let stream = TcpStream::connect(server.addr()).unwrap();
    let mut writer = stream.try_clone().unwrap();
    let mut reader = BufReader::new(stream);
    let mut line = String::new();

    writer.write_all(Frame::connect(1).encode().as_bytes()).unwrap();
    reader.read_line(&mut line).unwrap();
    assert_eq!(Frame::decode(&line).unwrap().seq, 1);

    // Garbage line: protocol error frame, connection stays up.
    writer.write_all(b"this is not a frame\n").unwrap();
    line.clear();
    reader.read_line(&mut line).unwrap();
    let error = Frame::decode(&line).unwrap();
    assert_eq!((error.kind, error.seq), (FrameKind::Response, 0));
    assert!(error.payload.starts_with("protocol error: malformed frame:"), "{}", error.payload);

    // Reused sequence number: same treatment.
    writer.write_all(Frame::request(1, "get_ut").encode().as_bytes()).unwrap();
    line.clear();
    reader.read_line(&mut line).unwrap();
    let error = Frame::decode(&line).unwrap();
    assert_eq!((error.kind, error.seq), (FrameKind::Response, 0));
    assert!(error.payload.contains("one request in flight"), "{}", error.payload);

    // A well-formed request still works afterwards.
    writer.write_all(Frame::request(2, "get_ut").encode().as_bytes()).unwrap();
    line.clear();
    reader.read_line(&mut line).unwrap();
    let reply = Frame::decode(&line).unwrap();
    assert_eq!((reply.kind, reply.seq), (FrameKind::Response, 2));
    assert!(reply.payload.starts_with("2045-01-03T"), "{}", reply.payload);
    server.shutdown();
}

#[test]
fn quit_command_ends_the_attachment_over_the_socket() {
    let server = ConsoleServer::spawn(fresh_session(), "127.0.0.1:0").unwrap();
    let mut client = SocketClient::open(server.addr()).unwrap();
    client.connect().unwrap();
    assert_eq!(client.request("quit").unwrap(), "");
    // The console sent a disconnect; the next request reports the closure.
    match client.request("get_ut") {
        Err(LinkError::Closed) => {}
        other => panic!("expected closed link, got {other:?}"),
    }
    server.shutdown();
}

#[test]
fn clock_never_decreases_across_frames() {
    let server = ConsoleServer::spawn(fresh_session(), "127.0.0.1:0").unwrap();
    let mut client = SocketClient::open(server.addr()).unwrap();
    client.connect().unwrap();
    let mut stamps = Vec::new();
    for _ in 0..3 {
        stamps.push(client.request("get_ut").unwrap());
    }
    client.request("add_alarm -name W -time 2045-01-03T20:30:00").unwrap();
    client.await_event(Some(Duration::from_secs(5))).unwrap();
    stamps.push(client.request("get_ut").unwrap());
    assert!(stamps.windows(2).all(|w| w[0] < w[1]), "{stamps:?}");
    server.shutdown();
}
