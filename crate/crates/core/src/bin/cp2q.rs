fn main() {
    std::process::exit(cp2q::cli::main_with(std::env::args_os()));
}
