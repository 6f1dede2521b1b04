#![no_main]

use libfuzzer_sys::fuzz_target;
use ncft::ncmeasure::MomentFunctional;
use ncft::ncseries::words_up_to;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(tau) = MomentFunctional::parse_table(s) {
        for w in words_up_to(tau.arity().clamp(1, 3), 3) {
            let _ = tau.eval(&w);
        }
    }
});
