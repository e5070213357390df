fn main() {
    std::process::exit(lattice_casimir_cli::run(std::env::args_os()));
}
