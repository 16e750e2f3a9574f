#![no_main]

use libfuzzer_sys::fuzz_target;
use ordlist::rangeproof::NNProof;

fuzz_target!(|data: &[u8]| {
    if let Ok(proof) = NNProof::from_bytes(data) {
        assert_eq!(proof.to_bytes(), data);
    }
});
