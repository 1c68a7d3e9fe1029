#![no_main]

use discreet_weighing::weighmodel::{validate_plan, Transcript};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(tr) = serde_json::from_slice::<Transcript>(data) else {
        return;
    };
    let report = validate_plan(&tr.plan);
    if tr.validate().is_ok() {
        assert!(report.is_ok());
        let json = serde_json::to_string(&tr).unwrap();
        assert_eq!(serde_json::from_str::<Transcript>(&json).unwrap(), tr);
    }
});
