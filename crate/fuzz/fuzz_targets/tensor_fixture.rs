//! Fuzz the JSON fixture loader: arbitrary bytes must produce either a
//! well-formed operator or a structured error, never a panic or a blow-up
//! (the loader bounds the tensor shape before allocating).

#![no_main]

use libfuzzer_sys::fuzz_target;
use qhd_core::fixtures::load_tensor_fixture;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = load_tensor_fixture(text);
    }
});
