#![no_main]

use horw::graph::{parse_edge_list, EdgeListFormat, Separator};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    for skip_header in [false, true] {
        let format = EdgeListFormat {
            separator: Separator::Comma,
            skip_header,
        };
        if let Ok((g, _)) = parse_edge_list(data, &format) {
            assert_eq!(g.labels().len(), g.node_count());
            for v in 0..g.node_count() {
                assert_eq!(g.labels().get(g.label(v)), Some(v));
            }
        }
    }
});
