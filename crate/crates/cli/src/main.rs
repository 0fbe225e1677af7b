use clap::Parser;

fn main() {
    let cli = selfaffine::Cli::parse();
    let code = selfaffine::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
