#![no_main]

use libfuzzer_sys::fuzz_target;
use ordlist::wire::Reader;
use ordlist::zkl::{ZklCommitment, ZklPublicKey};

fuzz_target!(|data: &[u8]| {
    // public key followed by the root commitment, as stored in com files
    let mut r = Reader::new(data);
    let Ok(_pk) = ZklPublicKey::read(&mut r) else {
        return;
    };
    let Ok(_com) = ZklCommitment::read(&mut r) else {
        return;
    };
    let _ = r.finish();
});
