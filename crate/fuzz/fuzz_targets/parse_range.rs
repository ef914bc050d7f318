#![no_main]

use cycle_lsi::parse::{parse_range, MAX_RANGE_LEN};
use cycle_lsi::Error;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    match parse_range(s) {
        Ok(r) => {
            assert!(r.start() <= r.end());
            assert!(r.end() - r.start() < MAX_RANGE_LEN);
            let again = parse_range(&format!("{}..{}", r.start(), r.end())).unwrap();
            assert_eq!(again, r);
        }
        Err(Error::Parse { position, .. }) => assert!(position <= s.len()),
        Err(e) => panic!("unexpected error kind: {e}"),
    }
});
