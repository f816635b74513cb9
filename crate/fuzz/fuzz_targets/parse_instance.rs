#![no_main]

use libfuzzer_sys::fuzz_target;
use lrn_core::parse;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(inst) = parse::parse_instance(s) {
        let again = format!("c={},p={},m={},n={}", inst.c, inst.p, inst.m, inst.n);
        assert_eq!(parse::parse_instance(&again).unwrap(), inst);
    }
});
