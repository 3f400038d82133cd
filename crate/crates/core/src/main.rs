fn main() { std::process::exit(patcalc::cli::main()); }
