fn main() {
    std::process::exit(perturb_rank::cli::run_command(std::env::args_os()));
}
