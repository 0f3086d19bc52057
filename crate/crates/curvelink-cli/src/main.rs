use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let mut out = String::new();
    let mut err = String::new();
    let code = curvelink_cli::run(&args, &mut out, &mut err);
    print!("{}", out);
    let _ = std::io::stderr().write_all(err.as_bytes());
    std::process::exit(code);
}
