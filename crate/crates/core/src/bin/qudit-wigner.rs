fn main() {
    std::process::exit(qudit_wigner::cli::run(std::env::args_os()));
}
