//! Built-in scene configurations.

pub const NAMES: [&str; 4] = ["example1", "example2", "example3", "example4"];

pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "example1" => include_str!("../presets/example1.toml"),
        "example2" => include_str!("../presets/example2.toml"),
        "example3" => include_str!("../presets/example3.toml"),
        "example4" => include_str!("../presets/example4.toml"),
        _ => return None,
    })
}
