fn main() {
    std::process::exit(walk_occupation::cli::run(std::env::args_os()));
}
