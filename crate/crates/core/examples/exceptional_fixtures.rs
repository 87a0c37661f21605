//! Writes the exceptional-algebra fixtures into `fixtures/`.

use std::path::Path;

use superprolong::split::{fixture_text, Exceptional};
use superprolong::F3;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    for e in Exceptional::ALL {
        let text = fixture_text::<F3>(e).expect("depth at most 2");
        let path = dir.join(format!("{}_p3.toml", e.name()));
        std::fs::write(&path, text).expect("fixtures directory is writable");
        println!("wrote {}", path.display());
    }
}
