fn main() {
    std::process::exit(duopoly::cli::run(std::env::args()));
}
