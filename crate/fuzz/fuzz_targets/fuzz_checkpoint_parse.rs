//! The checkpoint parser must never panic, must accept only well-formed
//! disjoint ranges, and truncation must be idempotent: re-parsing the valid
//! prefix yields the same entries.

#![no_main]

use libfuzzer_sys::fuzz_target;
use sqsf_cli::checkpoint::parse_checkpoint;

fuzz_target!(|text: &str| {
    let (entries, valid_len) = parse_checkpoint(text);
    assert!(valid_len <= text.len());
    for e in &entries {
        assert!(e.lo <= e.hi);
    }
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[..i] {
            assert!(a.hi < b.lo || b.hi < a.lo, "overlapping entries accepted");
        }
    }
    let (again, again_len) = parse_checkpoint(&text[..valid_len]);
    assert_eq!(again, entries);
    assert_eq!(again_len, valid_len);
});
