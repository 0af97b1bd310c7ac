fn main() {
    std::process::exit(trns::cli::main_exit_code());
}
