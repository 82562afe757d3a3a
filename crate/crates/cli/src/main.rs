fn main() {
    std::process::exit(deloc_cli::main_with_args(std::env::args_os()));
}
