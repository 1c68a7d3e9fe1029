#![no_main]

use discreet_weighing::search::ItineraryProfile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(profile) = serde_json::from_slice::<ItineraryProfile>(data) else {
        return;
    };
    if profile.classes().iter().map(|(_, n)| n).fold(0usize, |a, &n| a.saturating_add(n)) > 4096 {
        return;
    }
    let (plan, members) = profile.to_plan();
    assert_eq!(members.iter().map(Vec::len).sum::<usize>(), plan.t);
    assert_eq!(ItineraryProfile::from_plan(&plan), profile);
});
