//! Line-oriented TCP endpoint. Each connection owns a fresh session; every
//! command line is answered with one JSON event per line.

use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::net::{TcpListener, TcpStream};
use std::thread;

use crate::session::{Session, SessionConfig};

/// Runs one session over any line reader/writer pair until EOF.
pub fn run_session<R: BufRead, W: Write>(config: SessionConfig, input: R, mut output: W) -> io::Result<()> {
    let mut session = Session::new(config);
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        for ev in session.handle_line(&line) {
            output.write_all(ev.to_line().as_bytes())?;
            output.write_all(b"\n")?;
        }
        output.flush()?;
    }
    Ok(())
}

fn handle(stream: TcpStream, config: SessionConfig) -> io::Result<()> {
    let reader = BufReader::new(stream.try_clone()?);
    run_session(config, reader, BufWriter::new(stream))
}

/// Accepts connections forever, one thread per client.
pub fn serve(listener: TcpListener, config: SessionConfig) -> io::Result<()> {
    for stream in listener.incoming() {
        let stream = stream?;
        let cfg = config.clone();
        thread::spawn(move || {
            let _ = handle(stream, cfg);
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn events_per_line() {
        let input = "{\"seq\":1,\"kind\":\"reset\"}\n\nbroken\n";
        let mut out = Vec::new();
        run_session(SessionConfig::default(), input.as_bytes(), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].contains("E_NO_DATASET"));
        assert!(lines[1].contains("E_PARSE"));
    }
}
