#![no_main]

use causet::poset::CausalSet;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let cs = CausalSet::from_relations(
        6,
        [
            (0, 2),
            (2, 4),
            (1, 3),
            (3, 5),
            (0, 3),
            (1, 2),
            (2, 5),
            (3, 4),
        ],
    )
    .expect("fixed ladder");
    let _ = causet::io::parse_frame(data, &cs);
});
