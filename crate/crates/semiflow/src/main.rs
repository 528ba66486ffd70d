fn main() {
    std::process::exit(semiflow::cli::run(std::env::args()));
}
