fn main() {
    let code = ldpc_bounds::cli::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
