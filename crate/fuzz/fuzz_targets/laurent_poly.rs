#![no_main]

use libfuzzer_sys::fuzz_target;
use ncft::rmt::LaurentPoly;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = LaurentPoly::parse(s) {
        assert!(!f.terms().is_empty());
    }
});
