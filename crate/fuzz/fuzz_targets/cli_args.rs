#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| masspart_cli::fuzzing::cli_args(data));
