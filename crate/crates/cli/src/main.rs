fn main() -> std::process::ExitCode {
    ca_signals::cmd::main()
}
