fn main() {
    let code = flatcliff_cli::app::run(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
