#![no_main]

use libfuzzer_sys::fuzz_target;
use ordlist::ppal::QueryProof;

fuzz_target!(|data: &[u8]| {
    if let Ok(proof) = QueryProof::from_bytes(data) {
        assert_eq!(proof.to_bytes(), data);
    }
});
