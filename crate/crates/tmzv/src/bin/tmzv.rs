fn main() {
    std::process::exit(tmzv::cli::main_with_args(std::env::args_os()));
}
