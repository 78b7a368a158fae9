#![no_main]

use libfuzzer_sys::fuzz_target;
use permroot::notation::parse_permutation;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_permutation(text) {
        // canonical text must parse back to the same permutation
        let canonical = p.to_string();
        assert_eq!(parse_permutation(&canonical).unwrap(), p);
    }
});
