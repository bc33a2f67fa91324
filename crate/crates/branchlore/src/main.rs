fn main() {
    std::process::exit(branchlore::cli::main_entry());
}
