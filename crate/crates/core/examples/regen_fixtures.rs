//! Regenerates the bundled corpora under `data/` from the seeded
//! generators. Run after changing `scholnet::corpus`:
//!
//! ```bash
//! cargo run -p scholnet --example regen_fixtures
//! ```

use scholnet::corpus::{holdout_corpus, sample_corpus};
use scholnet::ingest::serialize_records;

fn main() {
    let data = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    std::fs::create_dir_all(&data).unwrap();
    for (name, (records, manifest)) in [
        ("sample50", sample_corpus()),
        ("synthetic200", holdout_corpus()),
    ] {
        std::fs::write(data.join(format!("{name}.jsonl")), serialize_records(&records)).unwrap();
        let mut manifest_json = serde_json::to_string_pretty(&manifest).unwrap();
        manifest_json.push('\n');
        std::fs::write(data.join(format!("{name}.manifest.json")), manifest_json).unwrap();
        println!("wrote {name}: {} records", records.len());
    }
}
