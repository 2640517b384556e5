fn main() {
    std::process::exit(lfamily::cli::run(std::env::args_os()));
}
