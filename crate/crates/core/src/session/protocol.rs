//! Newline-delimited JSON protocol: one request per line, one response per
//! request, each connection with its own document.

use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};

use serde::{Deserialize, Serialize};

use super::document::Document;
use super::{Options, Session};

#[derive(Debug, Deserialize)]
pub struct Request {
    pub id: i64,
    pub op: String,
    #[serde(default)]
    pub payload: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Hyp {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GoalRecord {
    pub hyps: Vec<Hyp>,
    pub concl: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ErrorRecord {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Response {
    pub id: i64,
    pub status: String,
    pub goals: Vec<GoalRecord>,
    pub output: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<ErrorRecord>,
}

pub struct Connection {
    doc: Document,
}

impl Connection {
    pub fn new(session: Session) -> Connection {
        Connection { doc: Document::new(session) }
    }

    fn goals(&self) -> Vec<GoalRecord> {
        self.doc
            .goals()
            .into_iter()
            .map(|g| GoalRecord {
                hyps: g.hyps.into_iter().map(|(name, _, ty)| Hyp { name, ty }).collect(),
                concl: g.conclusion,
            })
            .collect()
    }

    fn reply(&self, id: i64, result: Result<String, ErrorRecord>) -> Response {
        let goals = self.goals();
        match result {
            Ok(output) => Response { id, status: "ok".into(), goals, output, error: None },
            Err(e) => Response { id, status: "error".into(), goals, output: String::new(), error: Some(e) },
        }
    }

    pub fn handle(&mut self, req: &Request) -> Response {
        let result = match req.op.as_str() {
            "exec" => self.doc.exec(&req.payload).map(|outs| outs.join("\n")).map_err(|e| ErrorRecord {
                line: e.pos.line,
                col: e.pos.col,
                message: e.message(),
            }),
            "back" => match req.payload.trim().parse::<usize>() {
                Ok(n) => self.doc.back(n).map(|_| String::new()).map_err(|e| ErrorRecord {
                    line: 0,
                    col: 0,
                    message: e.to_string(),
                }),
                Err(_) => {
                    Err(ErrorRecord { line: 0, col: 0, message: format!("bad sentence count {:?}", req.payload) })
                }
            },
            "goals" => Ok(self.doc.session().proof().map(|p| p.render()).unwrap_or_default()),
            "env" => {
                let names: Vec<String> = self.doc.session().env().decls().map(|d| d.name().to_string()).collect();
                Ok(names.join("\n"))
            }
            "about" => Ok(format!("hurry {}", env!("CARGO_PKG_VERSION"))),
            op => Err(ErrorRecord { line: 0, col: 0, message: format!("unknown op {op}") }),
        };
        self.reply(req.id, result)
    }

    /// Handle one raw line; malformed requests get id -1.
    pub fn handle_line(&mut self, line: &str) -> String {
        let resp = match serde_json::from_str::<Request>(line) {
            Ok(req) => self.handle(&req),
            Err(e) => self.reply(-1, Err(ErrorRecord { line: 0, col: 0, message: format!("malformed request: {e}") })),
        };
        serde_json::to_string(&resp).expect("responses serialize")
    }
}

fn serve_connection(stream: TcpStream, opts: &Options) -> std::io::Result<()> {
    let session = Session::new(opts).map_err(|e| std::io::Error::other(e.to_string()))?;
    let mut conn = Connection::new(session);
    let mut out = stream.try_clone()?;
    for line in BufReader::new(stream).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        writeln!(out, "{}", conn.handle_line(&line))?;
        out.flush()?;
    }
    Ok(())
}

/// Accept connections forever, one thread and one document per connection.
pub fn serve(listener: TcpListener, opts: Options) -> std::io::Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        let opts = opts.clone();
        std::thread::spawn(move || {
            let _ = serve_connection(stream, &opts);
        });
    }
    Ok(())
}
