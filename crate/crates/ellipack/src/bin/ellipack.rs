fn main() { std::process::exit(ellipack::cli::run(std::env::args().skip(1))); }
