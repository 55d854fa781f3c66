fn main() {
    std::process::exit(seqdisc::cli::run(std::env::args_os()));
}
