fn main() {
    std::process::exit(rogonlab::cli::run(std::env::args().collect()));
}
