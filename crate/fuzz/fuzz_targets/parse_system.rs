#![no_main]

use chainlab::systems::{load_system, save_system};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(sys) = load_system(&text) {
        let saved = save_system(&sys);
        let back = load_system(&saved).expect("saved systems load");
        assert_eq!(save_system(&back), saved);
    }
});
