#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(loaded) = causet::io::parse_causet(data) {
        // Whatever loads must survive a round trip.
        let doc = causet::io::CausetDocument::from_causet(&loaded.causet);
        let again =
            causet::io::parse_causet(doc.to_json().as_bytes()).expect("written causet reloads");
        assert_eq!(again.causet, loaded.causet);
    }
});
