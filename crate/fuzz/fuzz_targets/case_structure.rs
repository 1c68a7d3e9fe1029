#![no_main]

use discreet_weighing::metrics::{case_marginals, minimax_distribution, CaseStructure, MAX_MINIMAX_CASES};
use discreet_weighing::rational::Rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(cs) = serde_json::from_slice::<CaseStructure>(data) else {
        return;
    };
    if cs.validate().is_err() || cs.t > 64 || cs.cases.len() > MAX_MINIMAX_CASES {
        return;
    }
    if let Ok((p, value)) = minimax_distribution(&cs) {
        let marginals = case_marginals(&cs, &p).unwrap();
        assert_eq!(marginals.iter().max(), Some(&value));
        assert_eq!(p.probabilities.iter().cloned().sum::<Rational>(), Rational::one());
    }
});
