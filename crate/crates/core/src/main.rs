fn main() {
    std::process::exit(dirac_shell::cli::run());
}
