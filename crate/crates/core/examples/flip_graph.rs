//! Flip graphs of small polygons. Pass n as the first argument to dump DOT.

use pentaflip::polygon::flip_graph;

fn main() {
    if let Some(n) = std::env::args().nth(1).and_then(|a| a.parse().ok()) {
        print!("{}", flip_graph(n).expect("3 <= n <= 12").to_dot());
        return;
    }
    for n in 3..=10 {
        let g = flip_graph(n).unwrap();
        println!("n={n:2}  triangulations={:5}  flips={:6}  connected={}", g.order(), g.edge_count(), g.is_connected());
    }
}
