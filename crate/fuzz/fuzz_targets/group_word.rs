#![no_main]

use libfuzzer_sys::fuzz_target;
use ncft::pathsig::GroupWord;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = GroupWord::parse(s) {
        // Parsed words are reduced, so printing and reparsing is the identity.
        assert_eq!(GroupWord::parse(&w.to_string()).unwrap(), w);
        assert!(w.compose(&w.inverse()).is_identity());
    }
});
