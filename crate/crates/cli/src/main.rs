fn main() {
    std::process::exit(opgraph_cli::main_with_args(std::env::args()));
}
