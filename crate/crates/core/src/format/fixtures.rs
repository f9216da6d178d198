//! The shipped example systems, embedded at compile time.

pub const WAVE: &str = include_str!("../../fixtures/wave.sys");
pub const HELMHOLTZ: &str = include_str!("../../fixtures/helmholtz.sys");
pub const GRADCURL: &str = include_str!("../../fixtures/gradcurl.sys");
pub const TWOTERM: &str = include_str!("../../fixtures/twoterm.sys");
pub const GENERIC: &str = include_str!("../../fixtures/generic.sys");
pub const TWOPOINT: &str = include_str!("../../fixtures/twopoint.sys");
pub const DELAY: &str = include_str!("../../fixtures/delay.sys");

pub const ALL: &[(&str, &str)] = &[
    ("wave.sys", WAVE),
    ("helmholtz.sys", HELMHOLTZ),
    ("gradcurl.sys", GRADCURL),
    ("twoterm.sys", TWOTERM),
    ("generic.sys", GENERIC),
    ("twopoint.sys", TWOPOINT),
    ("delay.sys", DELAY),
];
