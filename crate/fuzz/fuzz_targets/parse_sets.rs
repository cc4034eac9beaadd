#![no_main]

use chainlab::systems::{parse_sets_file, write_sets_file};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(sets) = parse_sets_file(&text) {
        let written = write_sets_file(&sets);
        assert_eq!(parse_sets_file(&written).expect("written sets parse"), sets);
    }
});
