fn main() {
    std::process::exit(besselmoments::cli::run(std::env::args_os()));
}
