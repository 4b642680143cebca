#![no_main]

use libfuzzer_sys::fuzz_target;

// Anything that parses must print to text that parses back to the same tree.
fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(pc) = pathart::parse_condition(text) {
            let printed = pathart::expr::print_condition(&pc);
            assert_eq!(pathart::parse_condition(&printed).as_ref(), Ok(&pc), "{printed}");
        }
    }
});
