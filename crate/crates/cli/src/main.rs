use std::io::Write;

fn main() {
    let mut out = std::io::BufWriter::new(std::io::stdout());
    let code = vahlen_cli::main_with_args(std::env::args_os(), &mut out, &mut std::io::stderr());
    let _ = out.flush();
    std::process::exit(code);
}
