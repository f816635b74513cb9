#![no_main]

use clap::Parser;
use libfuzzer_sys::fuzz_target;
use lrn_cli::Cli;

// Arguments are NUL-separated. Only parsing is exercised; running arbitrary
// commands could legitimately take unbounded time.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let args = std::iter::once("lrn").chain(s.split('\0'));
    let _ = Cli::try_parse_from(args);
});
