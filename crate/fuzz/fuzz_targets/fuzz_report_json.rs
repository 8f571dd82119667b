//! Report deserialization must never panic on arbitrary bytes, and any
//! report it accepts must survive a serialize/parse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;
use sqsf::VerifyReport;

fuzz_target!(|data: &[u8]| {
    if let Ok(report) = serde_json::from_slice::<VerifyReport>(data) {
        if report.wall_time_seconds.is_finite()
            && report.extremal.iter().all(|e| e.value.is_finite())
        {
            let text = serde_json::to_string(&report).unwrap();
            let back: VerifyReport = serde_json::from_str(&text).unwrap();
            assert_eq!(back, report);
        }
    }
});
