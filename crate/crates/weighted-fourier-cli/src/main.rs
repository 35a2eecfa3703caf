fn main() {
    std::process::exit(weighted_fourier_cli::run(std::env::args_os()));
}
