//! Command-line surface. Filled in as the library modules land.

pub fn run() {
    std::process::exit(0);
}
