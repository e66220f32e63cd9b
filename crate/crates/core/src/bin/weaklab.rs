fn main() {
    std::process::exit(weaklab::cli::main_with_args());
}
