use seshadri::*;
use std::time::Instant;

fn main() {
    let order = OrderSpec::half_order(97).unwrap();
    for qmax in [120u64, 150, 200, 250, 300] {
        let t0 = Instant::now();
        match has_two_submax_witness(&order, qmax) {
            Some(w) => {
                println!("qmax={qmax}: witness λ1={} λ2={} ({:?})", w.lambda1, w.lambda2, t0.elapsed());
                break;
            }
            None => println!("qmax={qmax}: none ({:?})", t0.elapsed()),
        }
    }
}
