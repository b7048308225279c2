fn main() {
    std::process::exit(zetalab::cli::main());
}
