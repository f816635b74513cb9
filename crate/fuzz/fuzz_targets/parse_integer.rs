#![no_main]

use libfuzzer_sys::fuzz_target;
use lrn_core::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(v) = parse::parse_integer(s) {
        // Decimal output must parse back to the same value.
        assert_eq!(parse::parse_integer(&v.to_string()).unwrap(), v);
    }
    let _ = parse::parse_u32(s, "fuzz");
    let _ = parse::parse_u64(s, "fuzz");
});
