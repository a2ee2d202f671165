fn main() {
    std::process::exit(platelab::cli::run());
}
