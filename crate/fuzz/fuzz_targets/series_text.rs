#![no_main]

use libfuzzer_sys::fuzz_target;
use ncft::ncseries::text::{from_text, to_text};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(series) = from_text(s, 3, 6) {
        let again = from_text(&to_text(&series), 3, 6).expect("rendered series parses");
        assert_eq!(again, series);
    }
});
