fn main() {
    std::process::exit(induct::cli::run(std::env::args_os()));
}
