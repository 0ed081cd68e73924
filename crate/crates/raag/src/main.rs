fn main() {
    std::process::exit(raag::cli::run(std::env::args()));
}
