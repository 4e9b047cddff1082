//! Fuzzes the run-config parser. Must never panic on arbitrary text.
#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 8192 {
        return;
    }
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = spinlab::config::parse_run_config(text);
    }
});
