fn main() {
    std::process::exit(nqa_lab::cli::main_with_args(std::env::args_os()));
}
