fn main() {
    std::process::exit(agl::cli::main(std::env::args_os()));
}
