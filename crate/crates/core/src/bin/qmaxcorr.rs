fn main() {
    std::process::exit(qmaxcorr::cli::run_cli(std::env::args_os()));
}
