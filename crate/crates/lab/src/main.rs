use std::io::Write;

fn main() {
    let out = rif_lab::app::run(std::env::args_os(), std::env::var(rif_lab::config::SEED_ENV).ok());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
