//! Writes the bundled synthetic rectifier dataset to stdout.
//!
//! cargo run -p swipt-core --example synthetic_dataset > data/rectifier_synthetic.csv

use swipt_core::fit::DATASET_HEADER;
use swipt_core::harvest::reference::{synthetic_rectifier, SYNTHETIC_P_SAT_DBM, SYNTHETIC_P_SEN_DBM};
use swipt_core::numerics::dbm_to_mw;

fn main() {
    let model = synthetic_rectifier::<f64>();
    println!("# Synthetic rectifier, not a measurement.");
    println!("# Efficiency eta(D) = 0.3 * (1 - (1 - t)^3)^2 with t = (D + 38)/18, D in dBm,");
    println!("# zero output up to {SYNTHETIC_P_SEN_DBM} dBm and saturation from {SYNTHETIC_P_SAT_DBM} dBm.");
    println!("{DATASET_HEADER}");
    for d in -45..=-20 {
        let x = dbm_to_mw(d as f64);
        let v = model.value(x);
        if v == 0.0 {
            println!("{d},0");
        } else {
            println!("{d},{v:e}");
        }
    }
}
