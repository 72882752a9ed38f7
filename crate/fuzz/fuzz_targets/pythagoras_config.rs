#![no_main]

use libfuzzer_sys::fuzz_target;

const CAUSET: &[u8] = br#"{"event_count": 6,
  "relations": [[0, 2], [2, 4], [1, 3], [3, 5], [0, 3], [1, 2], [2, 5], [3, 4]],
  "chains": {"P": {"events": [0, 2, 4], "valuations": [0, 1, 2]},
             "Q": {"events": [1, 3, 5], "valuations": [0, 1, 2]}}}"#;

fuzz_target!(|data: &[u8]| {
    if let Ok(doc) = causet::io::parse_pythagoras_config(data) {
        let loaded = causet::io::parse_causet(CAUSET).expect("fixed causet");
        if let Ok(cfg) = doc.resolve(&loaded) {
            let _ = causet::pythagoras::verify_pythagoras(&loaded.causet, &cfg, 1.0);
        }
    }
});
