fn main() {
    std::process::exit(spherepcf::cli::run(std::env::args_os()));
}
