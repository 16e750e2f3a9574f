#![no_main]

use libfuzzer_sys::fuzz_target;
use ordlist::zkl::ZklResponse;

fuzz_target!(|data: &[u8]| {
    if let Ok(response) = ZklResponse::from_bytes(data) {
        assert_eq!(response.to_bytes(), data);
    }
});
