fn main() {
    // Die quietly when a pipe closes early (`circpart table | head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(circpart::cli::run());
}
