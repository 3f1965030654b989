fn main() {
    std::process::exit(richlines::cli::run(std::env::args_os()));
}
