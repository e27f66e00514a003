#![no_main]

use libfuzzer_sys::fuzz_target;
use treach_core::io::parse_problem_str;

fuzz_target!(|data: &str| {
    let Ok(problem) = parse_problem_str(data) else {
        return;
    };
    // Anything accepted must survive a canonical round trip unchanged.
    let text = problem.to_json();
    let again = parse_problem_str(&text).expect("canonical output parses");
    assert_eq!(again, problem);
    assert_eq!(again.to_json(), text);
});
