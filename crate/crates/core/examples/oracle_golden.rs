//! Writes `<instance>.front.csv` beside each instance given on the command line.
//!
//! cargo run --release -p saba-core --example oracle_golden -- instances/tiny/*.json

use std::path::Path;
use std::time::Instant;

use saba_core::oracle::{enumerate_pareto, front_to_csv, OracleSpec};
use saba_core::Instance;

fn main() {
    let spec = OracleSpec { max_tasks: 6, split_granularity: 2 };
    for arg in std::env::args().skip(1) {
        let path = Path::new(&arg);
        let inst = Instance::from_json(&std::fs::read_to_string(path).expect("readable instance")).expect("valid instance");
        let t = Instant::now();
        let front = enumerate_pareto(&inst, &spec).expect("instance within oracle bounds");
        let out = path.with_extension("front.csv");
        std::fs::write(&out, front_to_csv(&front)).expect("writable output");
        eprintln!("{}: {} points in {:.1?}", out.display(), front.len(), t.elapsed());
    }
}
