fn main() {
    std::process::exit(paradecay::cli::run(std::env::args_os()));
}
