fn main() {
    cgm::cli::run();
}
