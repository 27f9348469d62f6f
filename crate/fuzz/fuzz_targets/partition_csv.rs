#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| masspart_cli::fuzzing::partition_csv(data));
