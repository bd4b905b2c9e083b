#![no_main]

use libfuzzer_sys::fuzz_target;
use spinal_core::codec::Message;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(message) = text.parse::<Message>() {
        let shown = message.to_string();
        assert_eq!(shown.parse::<Message>().unwrap(), message);
        assert_eq!(shown.len(), message.len());
    }
});
