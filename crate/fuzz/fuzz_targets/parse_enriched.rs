#![no_main]

use libfuzzer_sys::fuzz_target;
use permroot::notation::parse_enriched;

fuzz_target!(|data: &[u8]| {
    let Some((&first, rest)) = data.split_first() else {
        return;
    };
    let r = u32::from(first % 9) + 2;
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if let Ok(tau) = parse_enriched(text, r) {
        assert_eq!(parse_enriched(&tau.to_string(), r).unwrap(), tau);
    }
});
