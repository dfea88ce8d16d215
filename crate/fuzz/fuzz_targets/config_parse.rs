//! The config parser must never panic on arbitrary input; it either yields
//! a config or a structured error with a line number.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = rqi::config::parse_config(text);
    }
});
