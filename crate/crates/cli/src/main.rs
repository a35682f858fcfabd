fn main() {
    std::process::exit(lcverify_cli::run(std::env::args_os()));
}
