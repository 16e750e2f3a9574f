#![no_main]

use libfuzzer_sys::fuzz_target;
use ordlist::wire::Reader;
use ordlist::zkl::ZklState;

fuzz_target!(|data: &[u8]| {
    let mut r = Reader::new(data);
    let _ = ZklState::read(&mut r);
});
