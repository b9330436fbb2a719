fn main() {
    std::process::exit(dequant::cli::run(std::env::args_os()));
}
