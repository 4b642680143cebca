#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(bx) = pathart::parse_domain(text) {
            assert_eq!(pathart::parse_domain(&bx.to_string()).as_ref(), Ok(&bx));
        }
    }
});
