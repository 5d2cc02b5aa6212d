fn main() {
    std::process::exit(minsurf::cli::main_with_args(std::env::args_os()));
}
