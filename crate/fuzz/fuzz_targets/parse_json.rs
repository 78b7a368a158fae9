#![no_main]

use libfuzzer_sys::fuzz_target;
use permroot::notation::Parsed;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(parsed) = Parsed::from_json(text) {
        let again = Parsed::from_json(&parsed.to_json().to_string()).unwrap();
        assert_eq!(again, parsed);
    }
});
