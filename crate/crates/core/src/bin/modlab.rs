fn main() {
    std::process::exit(modlab::cli::run(std::env::args_os()));
}
