fn main() {
    std::process::exit(sgap_cli::run_cli());
}
