#![no_main]

use chainlab::Dyadic;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = text.parse::<Dyadic>() {
        assert_eq!(x.to_string().parse::<Dyadic>().unwrap(), x);
    }
});
