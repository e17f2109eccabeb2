use bbstep::bench::{self, BenchError};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    std::process::exit(real_main(&args));
}

fn real_main(args: &[String]) -> i32 {
    let config = match bench::parse_config(args) {
        Ok(config) => config,
        Err(BenchError::Help(text)) => {
            println!("{text}");
            return 0;
        }
        Err(err) => {
            eprintln!("error: {err}");
            return 2;
        }
    };

    let rows = match bench::run_benchmark(&config) {
        Ok(rows) => rows,
        Err(err) => {
            eprintln!("error: {err}");
            return 1;
        }
    };

    match &config.out {
        Some(path) => {
            if let Err(err) = bench::emit_summary(&rows, config.format, path) {
                eprintln!("error: {err}");
                return 1;
            }
            eprintln!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => print!("{}", bench::render_summary(&rows, config.format)),
    }

    if config.include_reference {
        println!();
        println!("Reference iteration counts (\"--\" = iteration cap reached; the");
        println!("bootstrap steplength behind these counts is not documented):");
        println!();
        print!("{}", bench::render_reference_markdown());
        println!();
        println!("Measured counts include the fixed bootstrap step as iteration 1.");
    }
    0
}
