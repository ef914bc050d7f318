#![no_main]

use cycle_lsi::parse::parse_count;
use cycle_lsi::Error;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    match parse_count(s) {
        Ok(v) => assert_eq!(parse_count(&v.to_string()).unwrap(), v),
        Err(Error::Parse { position, .. }) => assert!(position <= s.len()),
        Err(e) => panic!("unexpected error kind: {e}"),
    }
});
