use std::io::{BufRead, Write};
use std::net::TcpListener;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hurry::session::document::{run_file, Document};
use hurry::session::protocol::serve;
use hurry::session::{Options, Session};
use hurry::surface::lexer::split_sentences;

#[derive(Parser)]
#[command(name = "hurry", version, about = "A small Coq-style proof assistant")]
struct Cli {
    /// Extra directory searched by `Require Import` (repeatable).
    #[arg(long = "load-path", global = true)]
    load_path: Vec<PathBuf>,
    /// Start from an empty environment.
    #[arg(long, global = true)]
    no_prelude: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a script and print its transcript.
    Check { file: PathBuf },
    /// Read sentences from standard input.
    Repl,
    /// Serve the JSON line protocol.
    Serve {
        #[arg(long, default_value = "127.0.0.1:7878")]
        addr: String,
    },
}

fn options(cli: &Cli) -> Options {
    let mut load_path = cli.load_path.clone();
    if let Ok(v) = std::env::var("HURRY_LOAD_PATH") {
        load_path.extend(v.split(':').filter(|s| !s.is_empty()).map(PathBuf::from));
    }
    Options { prelude: !cli.no_prelude, load_path }
}

fn repl(session: Session) -> ExitCode {
    let mut doc = Document::new(session);
    let mut buf = String::new();
    let stdin = std::io::stdin();
    print!("> ");
    let _ = std::io::stdout().flush();
    for line in stdin.lock().lines() {
        let Ok(line) = line else { break };
        buf.push_str(&line);
        buf.push('\n');
        // Run once the buffer ends with a complete sentence.
        let complete = match split_sentences(&buf) {
            Ok(spans) => {
                spans.last().is_some_and(|(_, b)| buf[..*b].trim_end().ends_with('.') && buf[*b..].trim().is_empty())
            }
            Err(_) => true,
        };
        if complete {
            match doc.exec(&buf) {
                Ok(outs) => outs.iter().filter(|o| !o.is_empty()).for_each(|o| println!("{o}")),
                Err(e) => println!("Error: {e}"),
            }
            buf.clear();
        }
        print!("> ");
        let _ = std::io::stdout().flush();
    }
    println!();
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = options(&cli);
    let session = match Session::new(&opts) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("Error: {e}");
            return ExitCode::from(1);
        }
    };
    match &cli.cmd {
        Cmd::Check { file } => match run_file(session, file) {
            Ok(report) => {
                print!("{}", report.transcript);
                if report.success() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
            Err(e) => {
                eprintln!("Error: {e}");
                ExitCode::from(1)
            }
        },
        Cmd::Repl => repl(session),
        Cmd::Serve { addr } => {
            let listener = match TcpListener::bind(addr) {
                Ok(l) => l,
                Err(e) => {
                    eprintln!("Error: cannot bind {addr}: {e}");
                    return ExitCode::from(2);
                }
            };
            eprintln!("listening on {}", listener.local_addr().map(|a| a.to_string()).unwrap_or_default());
            match serve(listener, opts) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("Error: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
