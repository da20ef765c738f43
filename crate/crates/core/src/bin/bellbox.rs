fn main() {
    std::process::exit(bellbox::cli::run(std::env::args_os()));
}
