use seshadri::*;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let t: Rat = args[1].parse().unwrap();
    let o = OrderSpec::sqrt_order(2).unwrap();
    let t0 = Instant::now();
    let r = match certify_curve(&t, &o) {
        Ok(Some(_)) => "certified".into(),
        Ok(None) => "rejected".into(),
        Err(e) => format!("ERR {e}"),
    };
    println!("{t}: {r} in {:?}", t0.elapsed());
}
