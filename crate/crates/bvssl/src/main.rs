fn main() {
    std::process::exit(bvssl::cli::cli_main(std::env::args_os()));
}
