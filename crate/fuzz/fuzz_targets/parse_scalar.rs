#![no_main]

use libfuzzer_sys::fuzz_target;
use treach_core::{MaxPlus, MaxPlusVector};

fuzz_target!(|data: &str| {
    if let Ok(x) = data.parse::<MaxPlus>() {
        assert_eq!(x.to_string().parse::<MaxPlus>().unwrap(), x);
    }
    if let Ok(v) = data.parse::<MaxPlusVector>() {
        assert_eq!(v.to_string().parse::<MaxPlusVector>().unwrap(), v);
    }
});
