fn main() {
    env_logger::Builder::new().filter_level(log::LevelFilter::Warn).init();
    std::process::exit(bsqlab::cli::cli_main(std::env::args_os()));
}
