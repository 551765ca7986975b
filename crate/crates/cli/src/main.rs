use bhkzeta::commands::{render_text, run, Cli, Format};
use clap::Parser;

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(&cli, argv) {
        Ok(rep) => {
            match cli.format {
                Format::Json => println!("{}", rep.to_json()),
                Format::Text => print!("{}", render_text(&rep)),
            }
            std::process::exit(if rep.verified { 0 } else { 1 });
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
