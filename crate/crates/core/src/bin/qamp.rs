fn main() {
    std::process::exit(qamp_core::cli::run(std::env::args_os()));
}
