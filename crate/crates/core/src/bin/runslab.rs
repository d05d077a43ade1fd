fn main() {
    std::process::exit(runslab::cli::main());
}
