#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(input) = msgpass::json::parse_task_input(data) {
        // Evaluators must reject mismatched shapes with errors, not panics.
        let symbols = input.symbols();
        if input.size <= 64 {
            let _ = msgpass::tasks::counting_task_g(input.size, &symbols);
            let _ = msgpass::tasks::large_alphabet_task_g(input.size, &symbols);
            let _ = msgpass::tasks::disjointness_task_g(input.size, &symbols);
        }
    }
});
