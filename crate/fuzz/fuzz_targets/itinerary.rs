#![no_main]

use discreet_weighing::weighmodel::Itinerary;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(it) = s.parse::<Itinerary>() {
        assert_eq!(it.to_string(), s);
        assert_eq!(it.conjugate().conjugate(), it);
        assert_eq!(it.is_self_conjugate(), it.conjugate() == it);
    }
});
