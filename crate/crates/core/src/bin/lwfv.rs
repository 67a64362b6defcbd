fn main() {
    std::process::exit(lwfv::cli::main_with(std::env::args_os()));
}
