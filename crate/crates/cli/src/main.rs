fn main() {
    std::process::exit(drinfeld_cli::main_with(std::env::args_os()));
}
