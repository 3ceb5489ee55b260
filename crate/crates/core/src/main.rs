fn main() {
    std::process::exit(delayed_duffing::cli::run(std::env::args_os()));
}
