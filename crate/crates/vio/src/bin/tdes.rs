fn main() {
    std::process::exit(des_vio::cli::run(std::env::args_os()).code());
}
