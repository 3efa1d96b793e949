use partfrac::bench::TrackingAllocator;
use partfrac::cli;
use partfrac::config::Config;

#[global_allocator]
static ALLOC: TrackingAllocator = TrackingAllocator;

fn main() {
    let config = match Config::from_env() {
        Ok(config) => config,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(cli::EXIT_USAGE);
        }
    };
    let code = cli::run(
        std::env::args_os(),
        &config,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    std::process::exit(code);
}
