#![no_main]

use horw::dismantle::dismantle_with_order;
use horw::graph::{giant_component, parse_edge_list, EdgeListFormat};
use horw::simplicial::build_cover_capped;
use horw::walk::{rank_with_cover, WalkOptions};
use libfuzzer_sys::fuzz_target;

// edge list text after a leading byte that picks s
fuzz_target!(|data: &[u8]| {
    let Some((&first, text)) = data.split_first() else {
        return;
    };
    let Ok((g, _)) = parse_edge_list(text, &EdgeListFormat::default()) else {
        return;
    };
    if g.edge_count() == 0 || g.node_count() > 200 {
        return;
    }
    let (g, _) = giant_component(&g);
    let Ok(cover) = build_cover_capped(&g, 10_000) else {
        return;
    };
    let s = first as f64 / 255.0;
    let r = rank_with_cover(&g, &cover, s, WalkOptions::default()).unwrap();
    let total: f64 = r.scores.iter().sum();
    assert!((total - 1.0).abs() < 1e-9);
    let d = dismantle_with_order(&g, &r.order, 0.01).unwrap();
    assert!(d.final_gcc <= d.threshold);
});
