//! Builds the per-vertex neighborhood index, saves it and loads it back.

use subquest::generate::random_labeled;
use subquest::iso::{build_index, VertexIndex};

fn main() -> anyhow::Result<()> {
    let g = random_labeled(1000, 0.005, 4, 3);
    let index = build_index(&g, 2)?;
    println!("{} entries for {} vertices", index.entry_count(), index.vertex_count());
    for label in 0..4 {
        println!(
            "vertex 0, label {label}: best degree at 1 hop {:?}, within 2 hops {:?}",
            index.get(0, 1, label),
            index.best_within(0, 2, label)
        );
    }

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("graph.idx");
    index.save(&path)?;
    let loaded = VertexIndex::load(&path)?;
    assert_eq!(loaded.to_text(), index.to_text());
    println!("round trip through {} ok", path.display());
    Ok(())
}
