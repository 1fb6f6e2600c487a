fn main() {
    std::process::exit(ddqsl::cli::main_with_args(std::env::args_os()));
}
