fn main() {
    std::process::exit(mvwave::cli::cli_main(std::env::args_os()));
}
