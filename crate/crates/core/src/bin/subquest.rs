fn main() {
    std::process::exit(subquest::cli::run(std::env::args_os()));
}
