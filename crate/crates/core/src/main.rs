fn main() {
    std::process::exit(ising_forge::cli::run(std::env::args_os()));
}
