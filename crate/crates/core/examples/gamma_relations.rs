//! Checks the involution, far-commutation, pentagon and symmetry relations
//! of the flip generators under the Ptolemy action, over all fresh-labelled
//! triangulations.

use pentaflip::ptolemy::relation_suite;

fn main() {
    for n in 4..=7 {
        let suite = relation_suite(n).unwrap();
        println!("n = {n}: {}", if suite.holds { "all relations hold" } else { "FAILED" });
        for f in &suite.families {
            println!("  {:<10} {:4} instances  {:4} checked  {:4} vacuous", format!("{:?}", f.kind), f.instances, f.checked, f.vacuous);
            for failure in &f.failures {
                println!("    fails: {failure}");
            }
        }
    }
}
