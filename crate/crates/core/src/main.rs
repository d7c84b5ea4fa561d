fn main() {
    std::process::exit(pantsgraph::cli::run_command(std::env::args_os()));
}
