fn main() {
    std::process::exit(expsub_cli::main_with_args(std::env::args_os()));
}
