fn main() {
    std::process::exit(banachproj::cli::run(std::env::args_os()));
}
