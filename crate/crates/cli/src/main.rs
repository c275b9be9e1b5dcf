fn main() {
    std::process::exit(mub_lab::run(std::env::args_os()));
}
