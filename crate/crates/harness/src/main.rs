use clap::Parser;

use llmsat_harness::{
    resolve_settings, run_batch, BatchReport, Cli, ConfigFile,
};

fn main() {
    let cli = Cli::parse();
    let config = match &cli.config {
        Some(path) => match ConfigFile::load(path) {
            Ok(config) => config,
            Err(message) => {
                eprintln!("error: {message}");
                std::process::exit(1);
            }
        },
        None => ConfigFile::default(),
    };
    let settings = match resolve_settings(&cli, &config) {
        Ok(settings) => settings,
        Err(message) => {
            eprintln!("error: {message}");
            std::process::exit(1);
        }
    };

    let outcome = match run_batch(&settings) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    };
    let report = BatchReport::assemble(&settings, outcome);
    let paths = match report.write_all(&settings.out_dir) {
        Ok(paths) => paths,
        Err(e) => {
            eprintln!("error: cannot write report: {e}");
            std::process::exit(1);
        }
    };

    print!("{}", report.to_markdown());
    println!();
    for path in &paths {
        println!("wrote {}", path.display());
    }
    if report.partial {
        std::process::exit(2);
    }
}
