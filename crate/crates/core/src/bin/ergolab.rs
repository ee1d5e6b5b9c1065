fn main() {
    std::process::exit(ergolab::cli::run(std::env::args_os()));
}
