fn main() {
    std::process::exit(pqfront::cli::run());
}
