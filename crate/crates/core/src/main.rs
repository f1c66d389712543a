fn main() {
    std::process::exit(meander_wpt::cli::main_with_args(std::env::args_os()));
}
