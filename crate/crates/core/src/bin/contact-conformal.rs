fn main() {
    std::process::exit(contact_conformal::cli::main_with(std::env::args_os()));
}
