//! Fuzz the scalar text parser: it must never panic, and anything it accepts
//! must round-trip through the canonical printer.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qhd_core::kernel::scalar::parse_scalar;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(s) = parse_scalar(text) {
            let printed = s.to_string();
            let again = parse_scalar(&printed).expect("canonical form must reparse");
            assert_eq!(again, s, "round-trip through {printed:?} changed the value");
        }
    }
});
