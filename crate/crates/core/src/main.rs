fn main() {
    std::process::exit(spectral_groups::cli::run(std::env::args_os()));
}
