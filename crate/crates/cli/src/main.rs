fn main() {
    std::process::exit(mtrdl_cli::app::main_with(std::env::args_os()));
}
