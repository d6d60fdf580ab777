fn main() {
    std::process::exit(fhplab::cli::main_with_args(std::env::args_os()));
}
