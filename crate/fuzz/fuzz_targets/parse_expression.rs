//! Fuzzes the expression parser on arbitrary text. Parsing must never
//! panic, and anything that parses must survive the print/parse round trip
//! unchanged.
#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(poly) = spinlab::parser::parse(text) {
        let printed = spinlab::parser::canonical_text(&poly);
        let reparsed = spinlab::parser::parse(&printed)
            .unwrap_or_else(|e| panic!("canonical text `{printed}` failed to reparse: {e}"));
        assert_eq!(reparsed, poly, "round trip changed the polynomial");
    }
});
