fn main() {
    std::process::exit(dseu_cli::run(std::env::args_os()));
}
