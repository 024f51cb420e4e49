//! Runs the five-flip cycle on the symbolic pentagon fan and prints each new
//! diagonal label.

use pentaflip::ptolemy::verify_lemma1;

fn main() {
    let report = verify_lemma1();
    print!("{}", report.to_text());
    assert!(report.identity);
}
