fn main() {
    std::process::exit(convex_bodies::cli::run(std::env::args_os()));
}
