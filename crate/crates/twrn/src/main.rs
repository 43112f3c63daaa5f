fn main() {
    std::process::exit(twrn::cli::run(std::env::args_os()));
}
