//! Driving the command-line front end from code: write inputs, run two
//! subcommands, and replay the embedded configuration.

use std::io::Write;

use potential_axis::cli::run_args;

pub fn run() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let delta1 = dir.path().join("delta1.txt");
    std::fs::File::create(&delta1)?.write_all(b"1 0\n")?;
    let nat = dir.path().join("nat.txt");
    let mut f = std::fs::File::create(&nat)?;
    for k in 1..=10_000 {
        writeln!(f, "{k} 0")?;
    }

    let csv = run_args([
        "potential-axis",
        "balayage",
        "--genus",
        "0",
        "--input",
        delta1.to_str().unwrap(),
        "--emit",
        "distribution",
        "--format",
        "csv",
        "--grid",
        "0.25:4:2",
    ]);
    println!("balayage exit {}:\n{}", csv.exit_code, csv.text);

    let check = run_args([
        "potential-axis",
        "check",
        "--condition",
        "blaschke",
        "--input",
        nat.to_str().unwrap(),
    ]);
    let report: serde_json::Value = serde_json::from_str(&check.text)?;
    println!("blaschke on 1..10^4: exit {} ({})", check.exit_code, report["outcome"]);

    let saved = dir.path().join("config.json");
    std::fs::write(&saved, report["config"].to_string())?;
    let replay = run_args(["potential-axis", "report", "--config", saved.to_str().unwrap()]);
    println!("replayed report identical: {}", replay == check);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
