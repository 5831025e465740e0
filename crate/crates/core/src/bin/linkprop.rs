fn main() -> std::process::ExitCode {
    linkprop::cli::main()
}
