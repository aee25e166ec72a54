fn main() {
    std::process::exit(iet_rewind::cli::main_with_args(std::env::args_os()));
}
