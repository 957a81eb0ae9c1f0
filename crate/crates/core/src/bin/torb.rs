fn main() {
    std::process::exit(torb::cli::main());
}
