use clap::Parser;

fn main() {
    let cli = masspart_cli::args::Cli::parse();
    let code = match masspart_cli::run(cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("masspart: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
