fn main() {
    std::process::exit(kronecker_cli::main_with_args(std::env::args_os()));
}
