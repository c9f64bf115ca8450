fn main() {
    std::process::exit(symquant::cli::main_entry());
}
