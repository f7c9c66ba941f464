fn main() {
    std::process::exit(ringflux::cli::run());
}
