fn main() {
    std::process::exit(btc_cli::main_with_args(std::env::args_os()));
}
