fn main() {
    std::process::exit(chow_orbits::cli::main_from_env());
}
