use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use serde_json::json;

use rmc_core::graph::DatasetFormat;
use rmc_core::server::serve;
use rmc_core::session::{parse_script, replay, Command, Session, SessionConfig};
use rmc_core::svg::scene_to_svg;

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Replays command scripts against a dataset, exports snapshots, or
/// serves sessions over TCP (one JSON command per line in, events out).
#[derive(Parser)]
#[command(name = "rmc", version)]
struct Args {
    /// Dataset file; for CSV give `nodes.csv,edges.csv` or a directory holding both.
    #[arg(long)]
    data: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// input | degree | attr:<name>[:asc] | cluster:<name> | simclust
    #[arg(long)]
    order: Option<String>,
    /// Comma-separated similarity attributes.
    #[arg(long, value_delimiter = ',')]
    sim_attrs: Option<Vec<String>>,
    /// NDJSON command script. Relative paths inside it resolve against its directory.
    #[arg(long)]
    script: Option<PathBuf>,
    /// Write the final scene as SVG.
    #[arg(long)]
    snapshot: Option<PathBuf>,
    /// Print the final scene digest.
    #[arg(long)]
    digest: bool,
    /// Print the digest after every step.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    serve: bool,
    #[arg(long, default_value_t = 7878)]
    port: u16,
}

fn absolute(p: &str) -> Result<String> {
    let path = Path::new(p);
    if path.is_absolute() {
        return Ok(p.to_string());
    }
    Ok(std::env::current_dir()?.join(path).display().to_string())
}

fn prelude(args: &Args) -> Result<Vec<Command>> {
    let mut cmds = Vec::new();
    let auto = |kind: &str, payload| Command { seq: None, kind: kind.into(), payload };
    if let Some(data) = &args.data {
        let path = data.split(',').map(absolute).collect::<Result<Vec<_>>>()?.join(",");
        let format = args.format.map(|f| match f {
            Format::Json => DatasetFormat::Json,
            Format::Csv => DatasetFormat::Csv,
        });
        cmds.push(auto("load_dataset", json!({"path": path, "format": format})));
    }
    if let Some(order) = &args.order {
        cmds.push(auto("set_ordering", json!({"strategy": order})));
    }
    if let Some(attrs) = &args.sim_attrs {
        cmds.push(auto("set_similarity_attributes", json!({"attributes": attrs})));
    }
    Ok(cmds)
}

fn run(args: Args) -> Result<()> {
    let mut config = SessionConfig::from_env();
    if args.serve {
        let listener = TcpListener::bind(("127.0.0.1", args.port)).with_context(|| format!("binding port {}", args.port))?;
        eprintln!("listening on {}", listener.local_addr()?);
        serve(listener, config)?;
        return Ok(());
    }
    let mut commands = prelude(&args)?;
    if let Some(script) = &args.script {
        let text = std::fs::read_to_string(script).with_context(|| format!("reading {}", script.display()))?;
        let mut cmds = parse_script(&text)?;
        if !commands.is_empty() {
            // script numbering restarts after the command-line prelude
            cmds.iter_mut().for_each(|c| c.seq = None);
        }
        config.base_dir = script.parent().map(Path::to_path_buf);
        commands.extend(cmds);
    }
    if commands.is_empty() {
        bail!("nothing to do: give --data, --script or --serve");
    }
    let mut session = Session::new(config);
    let digests = replay(&mut session, &commands)?;
    if args.trace {
        for (i, d) in digests.iter().enumerate() {
            println!("{i}\t{d}");
        }
    }
    let scene = session.scene().context("no dataset was loaded")?;
    if args.digest {
        println!("{}", scene.digest());
    }
    if let Some(out) = &args.snapshot {
        std::fs::write(out, scene_to_svg(scene)).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rmc: {e:#}");
            ExitCode::FAILURE
        }
    }
}
