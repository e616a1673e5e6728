fn main() {
    let code = monge4::cli::run(std::env::args_os());
    std::process::exit(code);
}
