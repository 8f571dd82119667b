//! The config parser must never panic, and anything it accepts must pass
//! its own validation.

#![no_main]

use libfuzzer_sys::fuzz_target;
use sqsf_cli::config::parse_config;

fuzz_target!(|text: &str| {
    if let Ok(cfg) = parse_config(text) {
        assert!(cfg.validate().is_ok());
    }
});
