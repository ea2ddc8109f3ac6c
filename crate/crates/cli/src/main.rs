fn main() {
    std::process::exit(hcs_cli::main_with_args(std::env::args_os()));
}
