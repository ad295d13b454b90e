#![no_main]

use entangle_atlas::state_file::{parse_raw, parse_state, write_state};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let raw = parse_raw(text);
    if let Ok(rho) = parse_state(text) {
        // anything accepted must also pass the syntax layer and survive a round trip
        assert!(raw.is_ok());
        let back = parse_state(&write_state(&rho)).expect("written state reparses");
        assert_eq!(back.dims(), rho.dims());
    }
});
