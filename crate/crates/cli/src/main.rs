use std::io::{IsTerminal, Read, Write};

fn main() {
    let argv: Vec<String> = std::env::args().collect();
    let mut stdin = Vec::new();
    let wants_stdin = argv.iter().skip(1).any(|a| a == "-");
    if wants_stdin && !std::io::stdin().is_terminal() {
        let _ = std::io::stdin().read_to_end(&mut stdin);
    }
    let out = cpnet_cli::run(&argv, &stdin);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
