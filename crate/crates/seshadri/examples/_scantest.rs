use seshadri::*;
fn main() {
    for (e, w) in scan_range(100, 100) {
        match w {
            Some(w) => println!("e={e}: witness λ1={} λ2={}", w.lambda1, w.lambda2),
            None => println!("e={e}: NONE"),
        }
    }
}
