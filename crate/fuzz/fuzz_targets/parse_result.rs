#![no_main]

use libfuzzer_sys::fuzz_target;
use treach_core::io::{parse_result_str, sample_source};

fuzz_target!(|data: &str| {
    let Ok(result) = parse_result_str(data) else {
        return;
    };
    let text = result.to_json();
    assert_eq!(parse_result_str(&text).expect("canonical output parses"), result);
    let _ = sample_source(data);
});
