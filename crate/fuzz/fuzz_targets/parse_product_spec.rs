#![no_main]

use cycle_lsi::parse::parse_product_spec;
use cycle_lsi::products::{sharp_constant, ProductSpace};
use cycle_lsi::Error;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    match parse_product_spec(s) {
        Ok(factors) => {
            assert!(!factors.is_empty());
            assert!(factors.iter().all(|&(n, c)| n >= 2 && c > 0.0 && c.is_finite()));
            // building the space may overflow the state count, but never panics
            if let Ok(space) = ProductSpace::new(&factors) {
                if let Ok(v) = sharp_constant(&space) {
                    assert!(v >= 0.0);
                }
            }
        }
        Err(Error::Parse { position, .. }) => assert!(position <= s.len()),
        Err(e) => panic!("unexpected error kind: {e}"),
    }
});
