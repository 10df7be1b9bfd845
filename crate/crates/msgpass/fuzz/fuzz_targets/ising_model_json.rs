#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(model) = msgpass::json::parse_ising_model(data) {
        // BP on one round is defined for any parsed model of sane size.
        if model.graph().num_edges() <= 1_000 {
            let _ = msgpass::ising::bp_run(&model, 1);
        }
    }
});
