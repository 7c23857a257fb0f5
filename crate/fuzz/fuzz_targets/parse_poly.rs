#![no_main]

use bourbaki_core::parse::{parse_poly, render_poly};
use bourbaki_core::FieldSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    for field in [FieldSpec::QQ, FieldSpec::Fp(32003)] {
        // must never panic, and anything accepted must round-trip
        if let Ok(p) = parse_poly(s, 4, field) {
            let text = render_poly(&p);
            let back = parse_poly(&text, 4, field).expect("rendered form must reparse");
            assert_eq!(back, p);
        }
    }
});
