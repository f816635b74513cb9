#![no_main]

use libfuzzer_sys::fuzz_target;
use lrn_cli::OutputRecord;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rec) = OutputRecord::from_json(s) {
        assert_eq!(OutputRecord::from_json(&rec.to_json()).unwrap(), rec);
    }
});
