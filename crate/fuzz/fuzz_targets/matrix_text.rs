#![no_main]

use libfuzzer_sys::fuzz_target;
use ncft::matfun::CMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(mats) = CMatrix::parse_many(s) {
        let text: String = mats.iter().map(CMatrix::to_text).collect();
        assert_eq!(CMatrix::parse_many(&text).unwrap(), mats);
    }
});
