#![no_main]

use entangle_atlas::report::{csv_string, parse_csv, records_from_rows};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(rows) = parse_csv(data) else {
        return;
    };
    if let Ok(records) = records_from_rows(&rows) {
        let text = csv_string(&records).expect("records serialize");
        let again = parse_csv(text.as_bytes()).expect("emitted CSV reparses");
        assert_eq!(again.len(), rows.len());
    }
});
