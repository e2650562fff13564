fn main() {
    std::process::exit(simplex_kernels::cli::main());
}
