fn main() {
    std::process::exit(ncfrac::cli::run(std::env::args_os()));
}
