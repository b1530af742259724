fn main() {
    std::process::exit(apx::cli::run(std::env::args_os()));
}
