fn main() {
    std::process::exit(floquet_scan::cli::run(std::env::args_os()));
}
