fn main() {
    std::process::exit(mme::cli::main_with_args(std::env::args_os()));
}
