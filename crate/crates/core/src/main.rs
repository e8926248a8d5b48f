fn main() {
    std::process::exit(bundle_glue::cli::run(std::env::args_os()));
}
