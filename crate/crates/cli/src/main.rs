fn main() {
    let code = drkit_cli::run(std::env::args(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
