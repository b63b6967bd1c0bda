fn main() {
    std::process::exit(coarsehom::cli::run(std::env::args_os()));
}
