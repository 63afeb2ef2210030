fn main() {
    std::process::exit(rfsq_cli::run(std::env::args_os()));
}
