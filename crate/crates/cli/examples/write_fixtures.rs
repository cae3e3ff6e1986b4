//! Regenerates `fixtures/`: `cargo run -p gruss-cli --example write_fixtures`.

use std::path::Path;

use gruss_core::example::example_pair;
use gruss_core::io::{map_to_string, matrix_to_string};
use gruss_core::matcore::real_matrix;
use gruss_core::posmaps::{random_unital_cp, reduction_map, transpose_map};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir)?;
    let write = |name: &str, text: String| std::fs::write(dir.join(name), text + "\n");

    let (a3, b3) = example_pair(3);
    write("a2.json", matrix_to_string(&real_matrix(2, 2, &[1.0, 3.0, 3.0, 3.0])))?;
    write("b2.json", matrix_to_string(&real_matrix(2, 2, &[1.0, 0.0, 0.0, 3.0])))?;
    write("a3.json", matrix_to_string(&a3))?;
    write("b3.json", matrix_to_string(&b3))?;
    write("transpose2.json", map_to_string(&transpose_map(2)?))?;
    write("transpose3.json", map_to_string(&transpose_map(3)?))?;
    write("reduction3.json", map_to_string(&reduction_map(3)?))?;
    write("cp3.json", map_to_string(&random_unital_cp(3, 2, 7)?))?;
    Ok(())
}
