use std::io::{BufRead, BufReader, Write};
use std::net::TcpStream;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::Duration;

fn rmc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rmc"))
}

fn data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/walkthrough")
}

fn stdout(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn script_digest_matches_golden() {
    let golden = std::fs::read_to_string(data().join("walkthrough.digests")).unwrap();
    let last = golden.lines().last().unwrap();
    let out = stdout(rmc().arg("--script").arg(data().join("walkthrough.ndjson")).arg("--digest"));
    assert_eq!(out.trim(), last);
    let trace = stdout(rmc().arg("--script").arg(data().join("walkthrough.ndjson")).arg("--trace"));
    let listed: Vec<&str> = trace.lines().map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(listed, golden.lines().collect::<Vec<_>>());
}

#[test]
fn flags_build_a_prelude_and_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("m.svg");
    let players = data().join("players.json");
    let run = |seed: &str| {
        stdout(
            rmc()
                .env("RMC_SEED", seed)
                .args(["--data", players.to_str().unwrap(), "--order", "cluster:club", "--sim-attrs", "minutes,appearances,shots,goals"])
                .arg("--snapshot")
                .arg(&svg)
                .arg("--digest"),
        )
    };
    let a = run("1");
    assert_eq!(a, run("1"));
    assert_eq!(a.trim().len(), 16);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg"));
    assert!(text.matches("<rect").count() >= 95 * 95);
}

#[test]
fn bad_input_fails_cleanly() {
    let out = rmc().output().unwrap();
    assert!(!out.status.success());
    let out = rmc().args(["--data", "/nonexistent.json", "--digest"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("E_IO"));
    let out = rmc().args(["--data", data().join("players.json").to_str().unwrap(), "--order", "zigzag"]).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("E_ORDERING"));
}

#[test]
fn serve_answers_over_tcp() {
    let port = {
        let l = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        l.local_addr().unwrap().port()
    };
    let mut child = rmc().args(["--serve", "--port", &port.to_string()]).stderr(Stdio::null()).spawn().unwrap();
    let mut stream = None;
    for _ in 0..100 {
        if let Ok(s) = TcpStream::connect(("127.0.0.1", port)) {
            stream = Some(s);
            break;
        }
        std::thread::sleep(Duration::from_millis(50));
    }
    let mut stream = stream.expect("server came up");
    writeln!(stream, r#"{{"seq":1,"kind":"query_stats"}}"#).unwrap();
    let mut line = String::new();
    BufReader::new(stream.try_clone().unwrap()).read_line(&mut line).unwrap();
    child.kill().unwrap();
    child.wait().unwrap();
    assert!(line.contains("E_NO_DATASET"), "{line}");
}
