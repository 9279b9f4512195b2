fn main() {
    std::process::exit(shapespace::cli::run(std::env::args_os()));
}
