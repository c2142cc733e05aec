fn main() {
    std::process::exit(bicycle::cli::main_exit_code());
}
