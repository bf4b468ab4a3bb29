//! Generates the built-in instance families and writes one to disk.
//!
//! cargo run --example generate_instances -- /tmp/ut10.json

use obliv_match::io::write_instance;
use obliv_match::{
    generate_random, generate_upper_triangular, max_weight_matching, Realization, WeightDist,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dist: WeightDist = "uniform:0,1".parse()?;
    let (inst, real) = generate_random(6, 4, &dist, 0.5, 42)?;
    let Realization::Adversarial(bits) = &real else {
        unreachable!()
    };
    println!(
        "random 6x4: {} present edges, W* = {:.4}",
        bits.count_present(),
        max_weight_matching(&inst, bits)?.value
    );
    for row in bits.to_rows() {
        println!(
            "  {}",
            row.iter()
                .map(|&b| if b { '#' } else { '.' })
                .collect::<String>()
        );
    }

    let (ut, ut_real) = generate_upper_triangular(10)?;
    if let Some(path) = std::env::args().nth(1) {
        write_instance(&path, &ut, &ut_real)?;
        println!("wrote upper-triangular n=10 to {path}");
    }
    Ok(())
}
