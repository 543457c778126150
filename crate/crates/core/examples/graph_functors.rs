//! Applies the cohesive functors of the reflexive-graph model to a small
//! graph and prints the results as JSON.
//!
//! `cargo run --example graph_functors`

use cohtt::model::{delta, gamma, hom_graphs, nabla, pi0, product, sharp0, FinSet};

fn main() {
    // a -> b, plus an isolated c
    let mut x = delta(&FinSet::new(["a", "b", "c"]).expect("distinct labels"));
    x.add_edge(0, 1);
    println!(
        "X = {}",
        serde_json::to_string(&x).expect("graphs serialize")
    );
    println!("gamma X = {:?}", gamma(&x).labels());
    println!("pi0 X = {:?}", pi0(&x).set.labels());
    println!("sharp0 X has {} edges", sharp0(&x).edge_count());
    let two = FinSet::new(["0", "1"]).expect("distinct labels");
    let homs = |y| {
        hom_graphs(&x, &y, 1 << 16)
            .expect("small enumeration")
            .len()
    };
    println!("|Hom(X, delta 2)| = {}", homs(delta(&two)));
    println!("|Hom(X, nabla 2)| = {}", homs(nabla(&two)));
    let p = product(&x, &delta(&two));
    println!(
        "X x delta 2: {} vertices, {} components",
        p.graph.vertex_count(),
        pi0(&p.graph).count
    );
}
