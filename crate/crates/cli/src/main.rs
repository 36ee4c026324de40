fn main() {
    std::process::exit(dslab_cli::main_with(std::env::args_os()));
}
