use crystals_core::cartan::{CartanKind, CartanSpec};
use crystals_core::characters::{compare, freudenthal};
use crystals_core::crystal::generate;
use crystals_core::walls::{Wall, WallSpec};

fn main() {
    let spec = CartanSpec::new(CartanKind::AffD, 4).unwrap();
    let lambda = vec![1i64, 0, 0, 0, 0];
    let ws = WallSpec::new(&spec, &lambda).unwrap();
    let g = generate(Wall::ground(ws), Some(6), 1).unwrap();
    let table = freudenthal(&spec, &lambda, 6).unwrap();
    let diff = compare(&g, &table).unwrap();
    println!("discrepancies at depth 6: {:?}", diff);
    println!("nodes at delta drop:");
    for n in &g.nodes {
        if n.drop == vec![1, 1, 2, 1, 1] {
            println!("  {}", n.key);
        }
    }
}
