#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(manifest) = msgpass::manifest::RunManifest::parse(data) {
        let s = manifest.to_json_string();
        let again = msgpass::manifest::RunManifest::parse(s.as_bytes()).expect("round trip");
        assert_eq!(again, manifest);
    }
});
