fn main() {
    std::process::exit(rlem::cli::main_with(std::env::args_os()));
}
