//! The magnitude parser must never panic; accepted values are positive and
//! finite in log space.

#![no_main]

use libfuzzer_sys::fuzz_target;
use sqsf_cli::magnitude::{parse_magnitude, Magnitude};

fuzz_target!(|text: &str| {
    match parse_magnitude(text) {
        Ok(Magnitude::Exact(n)) => assert!(n >= 1),
        Ok(Magnitude::Log(m)) => assert!(m.log10().is_finite()),
        Err(_) => {}
    }
});
