#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Parsing must return an error on malformed input, never panic. A graph
    // that parses must round-trip through its own serialization.
    if let Ok(graph) = msgpass::json::parse_graph(data) {
        let s = msgpass::json::graph_to_json_string(&graph);
        let again = msgpass::json::parse_graph(s.as_bytes()).expect("round trip");
        assert_eq!(again.edges(), graph.edges());
    }
});
