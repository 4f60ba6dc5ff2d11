fn main() {
    std::process::exit(lnemlc::cli::run(std::env::args_os()));
}
