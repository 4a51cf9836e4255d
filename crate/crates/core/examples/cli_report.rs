//! Driving a subcommand in-process and reading its JSON-lines report.
//!
//! `cargo run --release --example cli_report`

use phylotope::cli::{run, Command, RunConfig, Suite};

fn main() -> phylotope::Result<()> {
    let cfg = RunConfig::new(Command::Replay(Suite::Gore));
    let mut buf = Vec::new();
    let status = run(&cfg, &mut buf)?;
    let text = String::from_utf8(buf).expect("utf-8");
    for line in text.lines() {
        println!("{line}");
    }
    println!("status: {status:?}");
    Ok(())
}
