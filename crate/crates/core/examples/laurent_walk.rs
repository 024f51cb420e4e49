//! A random flip walk from the fresh-labelled octagon fan. Every label it
//! produces has a monomial denominator.

use pentaflip::polygon::Triangulation;
use pentaflip::ptolemy::{laurent_walks, random_applicable_word, LabelledTriangulation, Policy};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let start = LabelledTriangulation::fresh(Triangulation::fan(8, 1).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let word = random_applicable_word(start.base(), 10, &mut rng);
    let report = start.apply_word(&word, Policy::Abort).unwrap();
    for step in &report.steps {
        let label = step.new_label.as_ref().unwrap();
        println!("{}  ->  {}   laurent: {}", step.letter, label, label.is_laurent());
    }

    let batch = laurent_walks(8, 10, seed, 100).unwrap();
    println!("{} labels over {} walks, all Laurent: {}", batch.labels_checked, batch.trials, batch.holds);
}
