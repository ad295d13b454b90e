#![no_main]

use entangle_atlas::report::RunManifest;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = RunManifest::from_json(text) {
        let back = RunManifest::from_json(&m.to_json().unwrap()).expect("manifest round trip");
        assert_eq!(back.config, m.config);
    }
});
