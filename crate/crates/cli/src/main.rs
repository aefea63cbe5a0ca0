fn main() {
    std::process::exit(surflift_cli::run(std::env::args_os()));
}
