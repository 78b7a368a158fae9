#![no_main]

use libfuzzer_sys::fuzz_target;
use permroot::perm::CycleType;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Some(rho) = CycleType::parse(text) {
        assert_eq!(CycleType::parse(&rho.to_string()), Some(rho));
    }
});
