//! Multiplies the five 3x3 flip matrices of the pentagon over z1..z5, once
//! from the literal tables and once generated from the flip sequence.

use pentaflip::gamma::d;
use pentaflip::korepanov::{pentagon_matrices, product, verify_matrix_pentagon, AreaFrame};
use pentaflip::polygon::Triangulation;

fn main() {
    for (i, m) in pentagon_matrices().iter().enumerate() {
        println!("M{}:\n{m}", i + 1);
    }
    let report = verify_matrix_pentagon();
    println!("tabulated product is I3: {}", report.identity);

    let fan = Triangulation::fan(5, 1).unwrap();
    let word = [d(1, 3, 4, 5), d(1, 2, 3, 5), d(2, 3, 4, 5), d(1, 2, 4, 5), d(1, 2, 3, 4)];
    let (generated, _) = AreaFrame::new(fan).embed_sequence(&word).unwrap();
    println!("generated factors match the table: {}", generated == pentagon_matrices());
    println!("generated product is I3: {}", product(&generated).unwrap().is_identity());
}
