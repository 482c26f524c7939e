fn main() {
    std::process::exit(bobb::cli::main());
}
