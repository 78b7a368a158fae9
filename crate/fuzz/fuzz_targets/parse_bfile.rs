#![no_main]

use libfuzzer_sys::fuzz_target;
use permroot::oeis::parse_bfile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(terms) = parse_bfile(text) {
        assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
    }
});
