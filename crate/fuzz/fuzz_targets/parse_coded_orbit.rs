#![no_main]

use chainlab::CodedOrbit;
use libfuzzer_sys::fuzz_target;

// Parsed orbits are not tied to a system, so only the text form is checked.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(orbit) = text.parse::<CodedOrbit>() {
        let back: CodedOrbit = orbit.to_string().parse().unwrap();
        assert_eq!(back, orbit);
        let _ = orbit.at(-1000);
        let _ = orbit.at(1000);
    }
});
