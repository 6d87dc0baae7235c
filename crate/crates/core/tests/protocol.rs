//! The line protocol, in process and over TCP.

mod common;

use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};

use hurry::session::document::run_source;
use hurry::session::protocol::{serve, Connection, Response};
use hurry::session::Options;
use hurry::surface::lexer::split_sentences;
use serde_json::{json, Value};

fn connection() -> Connection {
    Connection::new(common::prelude())
}

fn ask(c: &mut Connection, req: Value) -> Response {
    serde_json::from_str(&c.handle_line(&req.to_string())).expect("response parses")
}

#[test]
fn exec_check_true() {
    let mut c = connection();
    let line = c.handle_line(r#"{"id":1,"op":"exec","payload":"Check True."}"#);
    let v: Value = serde_json::from_str(&line).unwrap();
    assert_eq!(v, json!({"id": 1, "status": "ok", "goals": [], "output": "True : Prop"}));
}

#[test]
fn goals_after_split_and_back_to_start() {
    let mut c = connection();
    let r = ask(
        &mut c,
        json!({"id": 1, "op": "exec", "payload": "Theorem t : forall a b : Prop, a /\\ b -> b /\\ a. Proof. intros a b H. split."}),
    );
    assert_eq!(r.status, "ok");
    let r = ask(&mut c, json!({"id": 2, "op": "goals"}));
    assert_eq!(r.id, 2);
    assert_eq!(r.goals.len(), 2);
    assert_eq!(r.goals[0].concl, "b");
    assert_eq!(r.goals[1].concl, "a");
    let hyps: Vec<(&str, &str)> = r.goals[0].hyps.iter().map(|h| (h.name.as_str(), h.ty.as_str())).collect();
    assert_eq!(hyps, [("a", "Prop"), ("b", "Prop"), ("H", "a /\\ b")]);
    assert!(r.output.starts_with("2 subgoals"));
    let r = ask(&mut c, json!({"id": 3, "op": "back", "payload": "0"}));
    assert_eq!((r.status.as_str(), r.goals.len()), ("ok", 0));
}

#[test]
fn errors_carry_positions() {
    let mut c = connection();
    let r = ask(&mut c, json!({"id": 4, "op": "exec", "payload": "Check True.\nCheck (S True)."}));
    assert_eq!(r.status, "error");
    let e = r.error.unwrap();
    assert_eq!(e.line, 2);
    assert!(!e.message.starts_with("line"), "{}", e.message);
    // The sentence before the error stays executed.
    let r = ask(&mut c, json!({"id": 5, "op": "back", "payload": "1"}));
    assert_eq!(r.status, "ok");
    let r = ask(&mut c, json!({"id": 6, "op": "back", "payload": "2"}));
    assert_eq!(r.status, "error");
}

#[test]
fn split_without_a_proof() {
    let r = ask(&mut connection(), json!({"id": 7, "op": "exec", "payload": "split."}));
    assert_eq!(r.error.unwrap().message, "no proof in progress");
}

#[test]
fn malformed_requests_get_id_minus_one() {
    let mut c = connection();
    for bad in ["not json", r#"{"op":"exec"}"#, r#"{"id":"x","op":"exec"}"#] {
        let r: Response = serde_json::from_str(&c.handle_line(bad)).unwrap();
        assert_eq!((r.id, r.status.as_str()), (-1, "error"));
    }
    let r = ask(&mut c, json!({"id": 9, "op": "frobnicate"}));
    assert_eq!((r.id, r.status.as_str()), (9, "error"));
}

#[test]
fn env_and_about() {
    let mut c = connection();
    ask(&mut c, json!({"id": 1, "op": "exec", "payload": "Definition two := 2."}));
    let r = ask(&mut c, json!({"id": 2, "op": "env"}));
    assert_eq!(r.output.lines().last(), Some("two"));
    let r = ask(&mut c, json!({"id": 3, "op": "about"}));
    assert!(r.output.starts_with("hurry "));
}

#[test]
fn protocol_outputs_equal_direct_execution() {
    for file in ["transcript.v", "bin.v", "even.v"] {
        let src = common::corpus_source(file);
        let mut direct = common::prelude();
        let mut c = connection();
        for (k, (a, b)) in split_sentences(&src).unwrap().into_iter().enumerate() {
            let sentence = &src[a..b];
            let want = direct.exec_text(sentence).unwrap();
            let r = ask(&mut c, json!({"id": k, "op": "exec", "payload": sentence}));
            assert_eq!(r.id, k as i64);
            assert_eq!(r.output, want, "{file}: {sentence}");
        }
    }
}

#[test]
fn checking_is_deterministic() {
    for file in ["transcript.v", "bin.v", "even.v", "omega.v"] {
        let src = common::corpus_source(file);
        let a = run_source(common::prelude(), &src).transcript;
        let b = run_source(common::prelude(), &src).transcript;
        assert_eq!(a, b);
    }
}

#[test]
fn re_executing_after_back_reproduces_the_state() {
    let mut c = connection();
    let script = "Theorem t : True /\\ True. Proof. split.";
    let first = ask(&mut c, json!({"id": 1, "op": "exec", "payload": script}));
    ask(&mut c, json!({"id": 2, "op": "back", "payload": "2"}));
    let again = ask(&mut c, json!({"id": 3, "op": "exec", "payload": "split."}));
    assert_eq!(first.goals, again.goals);
    assert_eq!(first.output.lines().last(), again.output.lines().last());
}

#[test]
fn serves_independent_connections_over_tcp() {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    std::thread::spawn(move || serve(listener, Options::with_prelude()));
    let talk = |stream: &mut TcpStream, reader: &mut BufReader<TcpStream>, req: Value| -> Value {
        writeln!(stream, "{req}").unwrap();
        let mut line = String::new();
        reader.read_line(&mut line).unwrap();
        serde_json::from_str(&line).unwrap()
    };
    let mut a = TcpStream::connect(addr).unwrap();
    let mut ra = BufReader::new(a.try_clone().unwrap());
    let mut b = TcpStream::connect(addr).unwrap();
    let mut rb = BufReader::new(b.try_clone().unwrap());
    let v = talk(&mut a, &mut ra, json!({"id": 1, "op": "exec", "payload": "Definition only_a := 1."}));
    assert_eq!(v["status"], "ok");
    let v = talk(&mut b, &mut rb, json!({"id": 1, "op": "exec", "payload": "Check only_a."}));
    assert_eq!(v["status"], "error");
    let v = talk(&mut a, &mut ra, json!({"id": 2, "op": "exec", "payload": "Check only_a."}));
    assert_eq!(v["output"], "only_a : nat");
}
