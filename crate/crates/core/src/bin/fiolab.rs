fn main() {
    std::process::exit(fio_schatten::lab::cli::run_cli(std::env::args_os()));
}
