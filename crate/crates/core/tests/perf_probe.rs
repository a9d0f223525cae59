use cluster_painleve::budget::Budget;
use cluster_painleve::verify::*;
use cluster_painleve::rational::coprime_rf;
use std::time::Instant;

#[test]
fn t_coprime_y_pieces() {
    let budget = Budget::default();
    let t0 = Instant::now();
    let values = symbolic_reduced_orbit(4, 8, &budget).unwrap();
    eprintln!("orbit+convert k=4 n<=8 in {:.2?}", t0.elapsed());
    for (n, v) in values.iter().enumerate() {
        eprintln!("  y{n}: num {} den {}", v.numer().num_terms(), v.denom().num_terms());
    }
    for (a, b) in [(0usize, 3usize), (0, 4), (0, 8), (3, 6), (5, 8)] {
        let t1 = Instant::now();
        let ok = coprime_rf(&values[a], &values[b]).unwrap();
        eprintln!("  coprime({a},{b}) = {ok} in {:.2?}", t1.elapsed());
    }
}
