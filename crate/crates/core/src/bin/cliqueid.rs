fn main() {
    std::process::exit(cliqueid::cli::run(std::env::args_os()));
}
