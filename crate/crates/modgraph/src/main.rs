use std::io::Write;

fn main() {
    let r = modgraph::cli::run(std::env::args_os());
    // Input errors go to stderr so stdout only ever carries reports.
    let _ = if r.code == 2 {
        std::io::stderr().lock().write_all(r.out.as_bytes())
    } else {
        let mut out = std::io::stdout().lock();
        out.write_all(r.out.as_bytes()).and_then(|_| out.flush())
    };
    std::process::exit(r.code);
}
