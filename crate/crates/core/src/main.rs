fn main() {
    std::process::exit(signsum::cli::main_entry());
}
