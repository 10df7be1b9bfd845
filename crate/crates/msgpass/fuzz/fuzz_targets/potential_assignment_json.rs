#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok((graph, symbols)) = msgpass::json::parse_potential_assignment(data) {
        // A parsed assignment is total and in range: energy evaluation of the
        // all-zeros assignment must succeed.
        let x = vec![false; graph.num_vertices()];
        let _ = msgpass::map::energy(&graph, &symbols, &x).expect("total assignment");
    }
});
