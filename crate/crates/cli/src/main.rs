use clap::Parser;
use hvl_cli::{configure_threads, execute, Cli, EXIT_INPUT, EXIT_OK};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors are input errors; exit code 2 is reserved for hypothesis failures.
            std::process::exit(if e.use_stderr() { EXIT_INPUT } else { EXIT_OK });
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {}", e.message);
        std::process::exit(e.code);
    }
    let code = execute(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
