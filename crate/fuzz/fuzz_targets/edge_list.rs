#![no_main]

use horw::graph::{parse_edge_list, EdgeListFormat, Separator};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    for separator in [Separator::Auto, Separator::Whitespace] {
        let format = EdgeListFormat {
            separator,
            skip_header: false,
        };
        if let Ok((g, report)) = parse_edge_list(data, &format) {
            assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
            assert!(report.edge_lines >= g.edge_count());
            for (i, j) in g.edges() {
                assert!(i != j && g.has_edge(j, i));
            }
        }
    }
});
