//! Accepted state files must evaluate without panicking.

#![no_main]

use entangle_atlas::state_file::parse_state;
use entangle_atlas::{evaluate_all, Error};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(rho) = parse_state(text) else {
        return;
    };
    if rho.dim() > 16 {
        return;
    }
    match evaluate_all(&rho, Some(2.0)) {
        Ok(_) | Err(Error::ConvergenceFailure { .. }) => {}
        Err(e) => panic!("valid state rejected: {e}"),
    }
});
