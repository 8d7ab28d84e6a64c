fn main() {
    std::process::exit(chaingauge::cli::dispatch(std::env::args_os()));
}
