fn main() {
    std::process::exit(orchid::cli::run(std::env::args_os()));
}
