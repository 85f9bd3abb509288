fn main() {
    std::process::exit(lipgraph::cli::main());
}
