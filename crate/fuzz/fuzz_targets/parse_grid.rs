#![no_main]

use libfuzzer_sys::fuzz_target;
use permroot::oeis::OeisId;
use permroot::verify::{parse_values, Grid};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_values(text);
    let _ = Grid::new().set_assignment(text);
    let _ = text.parse::<OeisId>();
});
