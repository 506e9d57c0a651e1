use clap::Parser;
use paraion::{run, Cli, ExitCode};

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(()) => ExitCode::Success,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code as i32);
}
