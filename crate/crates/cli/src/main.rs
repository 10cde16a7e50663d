fn main() {
    std::process::exit(cocycle_forge::run_from_args(std::env::args_os()));
}
