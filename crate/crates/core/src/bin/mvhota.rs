fn main() {
    std::process::exit(mvhota::cli::run(std::env::args_os()));
}
