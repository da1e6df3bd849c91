fn main() {
    std::process::exit(tdcentral::cli::main_with(std::env::args_os()));
}
