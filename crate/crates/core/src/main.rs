fn main() {
    std::process::exit(lanchester_c2::cli::cli_main(std::env::args_os()));
}
