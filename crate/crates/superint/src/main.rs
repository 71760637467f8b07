fn main() {
    std::process::exit(superint::run(std::env::args_os()));
}
