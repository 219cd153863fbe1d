fn main() {
    std::process::exit(ultradisc::cli::main_with_args(std::env::args_os()));
}
