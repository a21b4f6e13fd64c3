fn main() {
    std::process::exit(stein_dpp::cli::dispatch(std::env::args_os()));
}
