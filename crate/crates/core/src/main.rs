fn main() {
    let code = adams_e2::cli::run(std::env::args_os(), &mut std::io::stdout());
    std::process::exit(code);
}
