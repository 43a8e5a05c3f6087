fn main() {
    let status = visatom::cli::main_with(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(status);
}
