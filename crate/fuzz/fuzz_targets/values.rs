#![no_main]
use gha_core::io::{parse_value_tokens, parse_values, ValueToken};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_values(text);
    // Also feed the raw text as a single token so fraction parsing sees
    // arbitrary strings without JSON escaping.
    if text.len() <= 256 {
        let _ = parse_value_tokens(&[ValueToken::Text(text.to_owned()), ValueToken::Text("1/3".into())]);
    }
});
