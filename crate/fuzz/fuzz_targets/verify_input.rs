#![no_main]

use discreet_weighing::report::parse_verify_input;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = parse_verify_input(data) else {
        return;
    };
    // evaluation cost grows with t and the number of weighings
    if input.t > 128 || input.weighings.len() > 12 {
        return;
    }
    if let Ok(report) = input.evaluate(None, None) {
        let json = serde_json::to_string(&report).unwrap();
        let back: discreet_weighing::report::RunReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
});
