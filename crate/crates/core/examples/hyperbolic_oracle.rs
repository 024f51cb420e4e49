//! Realizes the labelled pentagon as a decorated ideal polygon and compares
//! each symbolic flip label with the measured lambda length.

use std::collections::HashMap;

use pentaflip::hyperbolic::{crosscheck_trials, random_polygon_trials, realize_labelled_triangulation};
use pentaflip::ptolemy::{lemma1_word, LabelledTriangulation, Policy};
use pentaflip::symexpr::Var;

fn main() {
    let state = LabelledTriangulation::pentagon_fan();
    let values = [("a", 1.0), ("b", 2.0), ("c", 0.5), ("d", 1.5), ("e", 3.0), ("x", 2.5), ("y", 2.0)];
    let at: HashMap<Var, f64> = values.iter().map(|(n, v)| (Var::new(n).unwrap(), *v)).collect();
    let poly = realize_labelled_triangulation(&state, &at).unwrap();
    println!("{}", serde_json::to_string_pretty(&poly.to_json()).unwrap());

    let report = state.apply_word(&lemma1_word(), Policy::Abort).unwrap();
    for step in &report.steps {
        let edge = step.added.unwrap();
        let symbolic = step.new_label.as_ref().unwrap().eval_f64(&at).unwrap();
        let measured = poly.lambda_length(edge.lo() - 1, edge.hi() - 1);
        println!("{edge}: symbolic {symbolic:.12}  measured {measured:.12}");
    }

    println!("{:?}", random_polygon_trials(6, 42, 100).unwrap());
    println!("{:?}", crosscheck_trials(5, None, 42, 100).unwrap());
}
