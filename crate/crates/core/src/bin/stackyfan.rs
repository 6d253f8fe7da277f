use std::io::Write;

fn main() {
    let result = stackyfan::cli::run(std::env::args_os(), &mut std::io::stdin().lock());
    let mut out = std::io::stdout().lock();
    if let Some(text) = &result.text {
        let _ = write!(out, "{text}");
    } else if !result.payload.is_null() {
        let _ = writeln!(out, "{}", result.payload_text());
    }
    let _ = out.flush();
    let mut err = std::io::stderr().lock();
    for d in &result.diagnostics {
        let _ = writeln!(err, "{}", d.trim_end());
    }
    if let Some(s) = &result.summary {
        let _ = write!(err, "{s}");
    }
    std::process::exit(result.status.exit_code());
}
