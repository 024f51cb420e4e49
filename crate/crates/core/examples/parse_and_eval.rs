//! Parses rational expressions, shows their canonical forms and evaluates
//! them exactly.

use std::collections::HashMap;

use pentaflip::symexpr::{parse_expr, BigRational, Var};

fn main() {
    let inputs = ["(a*c + b*d)/x", "(x^2 - y^2)/(x - y)", "a/(2*b) + a/(2*b)", "(a*(c*e + d*x)/y + b*e)/x"];
    let at: HashMap<Var, BigRational> = ["a", "b", "c", "d", "e", "x", "y"]
        .iter()
        .zip(1i64..)
        .map(|(n, v)| (Var::new(n).unwrap(), BigRational::from_integer(v.into())))
        .collect();
    for text in inputs {
        let f = parse_expr(text).unwrap();
        println!("{text}\n  = {f}\n  laurent: {}  value at a..y = 1..7: {}", f.is_laurent(), f.eval_rational(&at).unwrap());
    }
    match parse_expr("a / (b - b)") {
        Ok(f) => println!("unexpected: {f}"),
        Err(e) => println!("a / (b - b): {e}"),
    }
}
