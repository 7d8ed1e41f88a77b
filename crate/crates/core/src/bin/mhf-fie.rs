fn main() {
    std::process::exit(mhf_fie::cli::run(std::env::args_os()));
}
