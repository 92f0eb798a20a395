fn main() {
    std::process::exit(lasso_screen_cli::run(std::env::args_os()));
}
