fn main() {
    std::process::exit(bihermitian::cli::run_command(std::env::args_os()));
}
