fn main() {
    std::process::exit(torsieve::cli::run(std::env::args_os()));
}
