fn main() {
    std::process::exit(cr_wedge::cli::main_with(std::env::args_os()));
}
