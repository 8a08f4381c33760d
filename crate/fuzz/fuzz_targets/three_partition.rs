#![no_main]
use gha_core::io::{parse_three_partition, parse_witness};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // Split at the first newline: instance, then an optional witness.
    let (tp, witness) = text.split_once('\n').unwrap_or((text, ""));
    let Ok(tp) = parse_three_partition(tp) else { return };
    tp.validate().expect("parsed instances are valid");
    if let Ok(w) = parse_witness(witness) {
        let _ = w.validate(&tp);
    }
});
