#![no_main]

use bourbaki_core::input::parse_document;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    // document parsing must reject garbage with an error, never a panic
    let _ = parse_document(s, None);
});
