#![no_main]

use libfuzzer_sys::fuzz_target;
use ncft::pathsig::PlPath;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(paths) = PlPath::parse_file(s) else { return };
    for p in &paths {
        let again = PlPath::parse(&p.to_line(), Some(p.dim())).expect("rendered path parses");
        assert_eq!(&again, p);
    }
});
