fn main() {
    std::process::exit(genrec::cli::cli_main(std::env::args()));
}
