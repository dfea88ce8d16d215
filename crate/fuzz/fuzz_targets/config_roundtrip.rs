//! Any input the parser accepts must survive render -> parse unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = rqi::config::parse_config(text) {
        let rendered = cfg.to_text();
        let again = rqi::config::parse_config(&rendered)
            .expect("rendered config must parse");
        assert_eq!(cfg, again, "config round-trip must be lossless");
    }
});
