fn main() -> std::process::ExitCode {
    trk::cli::main()
}
