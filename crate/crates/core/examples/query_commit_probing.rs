//! Driving the probe environment by hand: probes of matched vertices and
//! repeated probes are rejected, and present edges are committed at once.

use obliv_match::probe::write_probe_log_csv;
use obliv_match::{BipartiteInstance, Grid, ProbeEnv, Realization};

fn main() -> Result<(), obliv_match::Error> {
    let inst = BipartiteInstance::from_rows(vec![vec![3.0, 1.0], vec![2.0, 2.0]])?;
    let real =
        Realization::Adversarial(Grid::from_rows(vec![vec![false, true], vec![true, true]])?);
    let mut env = ProbeEnv::new(&inst, &real, 0)?;

    println!("probe (0,0): {:?}", env.probe(0, 0)?);
    println!("probe (0,0) again: {}", env.probe(0, 0).unwrap_err());
    println!("probe (0,1): {:?}", env.probe(0, 1)?);
    println!("probe (1,1): {}", env.probe(1, 1).unwrap_err());
    println!("probe (1,0): {:?}", env.probe(1, 0)?);

    let m = env.final_matching();
    println!("matching {:?}, weight {}", m.pairs(), m.total_weight());
    write_probe_log_csv(std::io::stdout(), 0, env.log(), true)
}
