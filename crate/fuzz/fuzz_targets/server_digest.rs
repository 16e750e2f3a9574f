#![no_main]

use libfuzzer_sys::fuzz_target;
use ordlist::ppal::ServerDigest;

fuzz_target!(|data: &[u8]| {
    if let Ok(digest) = ServerDigest::from_bytes(data) {
        assert_eq!(digest.to_bytes(), data);
    }
});
