fn main() {
    std::process::exit(blackwell::cli::main());
}
