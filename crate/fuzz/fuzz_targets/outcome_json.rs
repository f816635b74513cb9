#![no_main]

use libfuzzer_sys::fuzz_target;
use lrn_core::solver::OutcomeJson;

fuzz_target!(|data: &[u8]| {
    if let Ok(out) = serde_json::from_slice::<OutcomeJson>(data) {
        let text = serde_json::to_string(&out).unwrap();
        assert_eq!(serde_json::from_str::<OutcomeJson>(&text).unwrap(), out);
    }
});
