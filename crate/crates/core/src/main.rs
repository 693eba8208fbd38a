use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let report = potential_axis::cli::run_args(std::env::args_os());
    let mut out = if report.exit_code == potential_axis::cli::EXIT_INPUT {
        Box::new(std::io::stderr()) as Box<dyn Write>
    } else {
        Box::new(std::io::stdout())
    };
    let _ = out.write_all(report.text.as_bytes());
    ExitCode::from(report.exit_code as u8)
}
