fn main() {
    std::process::exit(braidosc::cli::run(std::env::args_os()));
}
