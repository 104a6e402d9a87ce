use clap::Parser;

fn main() {
    let cli = tmems_cli::Cli::parse();
    match tmems_cli::run(&cli) {
        Ok(summary) => {
            for a in &summary.artifacts {
                println!("wrote {a}");
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}
