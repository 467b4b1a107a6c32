fn main() {
    std::process::exit(packing_chromatic::cli::run());
}
