fn main() {
    std::process::exit(hammaps::cli::main_with_args(std::env::args_os()));
}
