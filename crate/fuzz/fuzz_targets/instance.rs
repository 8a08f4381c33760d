#![no_main]
use gha_core::io::{instance_to_json, parse_instance};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(inst) = parse_instance(text) {
        let again = parse_instance(&instance_to_json(&inst)).expect("emitted instance parses");
        assert_eq!(again, inst);
        if inst.n() <= 8 {
            let _ = gha_core::exact::solve_exact_dp(&inst);
        }
    }
});
