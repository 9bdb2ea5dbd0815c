fn main() {
    std::process::exit(glued_cd::cli::cli_main(std::env::args_os()));
}
