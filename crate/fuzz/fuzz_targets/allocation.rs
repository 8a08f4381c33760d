#![no_main]
use gha_core::io::{allocation_to_json, parse_allocation};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(alloc) = parse_allocation(text) {
        let again = parse_allocation(&allocation_to_json(&alloc)).expect("emitted allocation parses");
        assert_eq!(again, alloc);
    }
});
