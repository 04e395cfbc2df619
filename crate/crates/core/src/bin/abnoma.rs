fn main() {
    std::process::exit(abnoma::cli::run(std::env::args_os()));
}
