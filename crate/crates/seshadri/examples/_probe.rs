use seshadri::*;
use std::io::Write;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let e: u64 = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(2);
    let half = args.get(2).map(|s| s == "half").unwrap_or(false);
    let qmax: u64 = args.get(3).map(|s| s.parse().unwrap()).unwrap_or(50);
    let o = if half { OrderSpec::half_order(e).unwrap() } else { OrderSpec::sqrt_order(e).unwrap() };
    let fi_hi = match (e, half) {
        (2, false) => Rat::from_pair(1, 2),
        (5, true) => Rat::from_pair(1, 2),
        (33, true) => Rat::from_pair(2, 5),
        _ => Rat::from_pair(1, 3),
    };
    let lo = Surd::zero(e);
    let hi = Surd::from_rat(fi_hi.clone(), e);
    let mut all = vec![Rat::zero()];
    all.extend(farey::fractions_in_interval(&lo, &hi, qmax));
    all.push(fi_hi);
    let total = Instant::now();
    let mut ncert = 0;
    for l in all {
        let t0 = Instant::now();
        let r = match certify_curve(&l, &o) {
            Ok(Some(_)) => { ncert += 1; "certified" }
            Ok(None) => "rejected",
            Err(Error::SquareSelfIntersection) => "square",
            Err(e) => { println!("{l}: ERR {e}"); continue }
        };
        let dt = t0.elapsed();
        if dt.as_millis() > 400 {
            println!("{l}: {r} in {dt:?}");
            std::io::stdout().flush().unwrap();
        }
    }
    println!("TOTAL {:?}, certified {ncert}", total.elapsed());
}
