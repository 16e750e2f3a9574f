#![no_main]

use libfuzzer_sys::fuzz_target;
use ordlist::container::Container;

fuzz_target!(|data: &[u8]| {
    // Framing parser over untrusted bytes: must never panic. A successful
    // parse must re-serialize to the identical byte string.
    if let Ok(container) = Container::parse(data) {
        assert_eq!(container.to_bytes(), data);
    }
});
