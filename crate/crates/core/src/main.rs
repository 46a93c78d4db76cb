fn main() {
    std::process::exit(qmasa::cli::main_with_args(std::env::args_os()));
}
