fn main() {
    std::process::exit(harmdisk::cli::main_with_args(std::env::args_os()));
}
