fn main() {
    std::process::exit(lintrans::cli::run(std::env::args_os()));
}
