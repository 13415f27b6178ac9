use subrepair::bounds::{
    fractional_bound, integer_bound, report, scheme_bandwidth, sweep, BoundInput,
};

/// `best[j][s]`: least `sum q^(e_i)` over `j` nodes whose exponents
/// `e_i in 0..=ell` add up to `s`. A node downloading `b` sub-symbols has
/// `e = ell - b`, and the constraint `sum q^-b <= L` reads `sum q^e <= den`.
fn exponent_table(q: u64, ell: u32, nodes: usize) -> Vec<Vec<u128>> {
    let max_s = nodes * ell as usize;
    let mut best = vec![vec![u128::MAX; max_s + 1]; nodes + 1];
    best[0][0] = 0;
    for j in 1..=nodes {
        for s in 0..=j * ell as usize {
            for e in 0..=(ell as usize).min(s) {
                let prev = best[j - 1][s - e];
                if prev != u128::MAX {
                    let w = prev + (q as u128).pow(e as u32);
                    if w < best[j][s] {
                        best[j][s] = w;
                    }
                }
            }
        }
    }
    best
}

/// Smallest total download meeting the constraint, by search over the table.
fn oracle(table: &[Vec<u128>], nodes: usize, ell: u32, den: u128) -> u64 {
    let s = table[nodes]
        .iter()
        .rposition(|&w| w <= den)
        .expect("all-ell download is always feasible");
    (nodes * ell as usize - s) as u64
}

#[test]
fn integer_bound_matches_exhaustive_minimization() {
    let fields: [(u64, u32); 19] = [
        (2, 2),
        (2, 3),
        (2, 4),
        (2, 5),
        (2, 6),
        (2, 7),
        (2, 8),
        (3, 2),
        (3, 3),
        (3, 4),
        (4, 2),
        (4, 3),
        (5, 2),
        (5, 3),
        (7, 2),
        (8, 2),
        (9, 2),
        (13, 2),
        (16, 2),
    ];
    let mut checked = 0;
    for (q, ell) in fields {
        let order = q.pow(ell);
        let max_n = order.min(64) as usize;
        let table = exponent_table(q, ell, max_n - 1);
        for n in 2..=max_n as u64 {
            for k in 1..n {
                for t in 0..n - k {
                    let input = BoundInput::new(n, k, t, q, ell).unwrap();
                    let den = (order as u128 - 1) * (n - k - t) as u128 + (n - 1) as u128;
                    let want = oracle(&table, n as usize - 1, ell, den);
                    assert_eq!(
                        integer_bound(&input),
                        want,
                        "n={n} k={k} t={t} q={q} ell={ell}"
                    );
                    let frac = fractional_bound(&input).value;
                    assert!(frac <= want as f64 + 1e-9, "fractional {frac} above {want}");
                    if let Some((bw, _)) = scheme_bandwidth(&input) {
                        assert!(
                            bw >= want,
                            "scheme {bw} beats the bound {want} at n={n} k={k} t={t}"
                        );
                    }
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100_000);
}

#[test]
fn full_length_codes_with_power_room_attain_the_bound() {
    for (q, ell) in [(2u64, 3u32), (2, 4), (2, 8), (3, 2), (3, 3), (4, 2), (4, 3)] {
        let n = q.pow(ell);
        for m in 1..ell {
            for t in 1..4 {
                // n - k - t + 1 = q^m
                let Some(k) = (n + 1).checked_sub(t + q.pow(m)).filter(|&k| k >= 1) else {
                    continue;
                };
                let r = report(&BoundInput::new(n, k, t, q, ell).unwrap());
                assert_eq!(r.m, m);
                assert!(r.attained, "n={n} k={k} t={t}");
                assert_eq!(r.integer, (n - 1) * (ell - m) as u64);
                assert!((r.fractional.value - r.integer as f64).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn reference_instances() {
    let small = BoundInput::new(8, 5, 2, 2, 3).unwrap();
    assert_eq!(integer_bound(&small), 14);
    assert!((fractional_bound(&small).value - 14.0).abs() < 1e-12);
    let big = BoundInput::new(256, 99, 30, 2, 8).unwrap();
    assert_eq!(integer_bound(&big), 255);
    assert!((fractional_bound(&big).value - 255.0).abs() < 1e-9);
    let table = exponent_table(2, 8, 255);
    let den = 255 * (256 - 99 - 30) + 255;
    assert_eq!(oracle(&table, 255, 8, den), 255);
}

#[test]
fn sweep_shape() {
    let rows = sweep(99, 30, 2, 8, 129..=255).unwrap();
    assert_eq!(rows.len(), 127);
    let last = rows.last().unwrap();
    assert_eq!(
        (last.d, last.bw_private, last.bound_private),
        (255, 255, 255)
    );
    assert!(last.attained);
    for w in rows.windows(2) {
        assert!(w[1].bw_private <= w[0].bw_private);
        assert!(w[1].bound_private <= w[0].bound_private);
        assert!(w[1].bw_plain <= w[0].bw_plain);
    }
    for r in &rows {
        assert!(r.bw_private >= r.bw_plain, "d={}", r.d);
        assert!(r.bound_private >= r.bound_plain, "d={}", r.d);
        assert!(r.bw_private >= r.bound_private);
        assert!(r.bw_private <= 99 * 8 + 29 * 8);
    }
}

#[test]
fn private_cost_is_plain_cost_of_a_larger_code() {
    for (q, ell) in [(2u64, 3u32), (2, 4), (2, 6), (3, 2), (3, 3), (4, 3), (8, 2)] {
        let order = q.pow(ell);
        for n in 3..=order.min(64) {
            for k in 1..n {
                for t in 1..n - k {
                    let private = scheme_bandwidth(&BoundInput::new(n, k, t, q, ell).unwrap());
                    let plain =
                        scheme_bandwidth(&BoundInput::new(n, k + t - 1, 0, q, ell).unwrap());
                    assert_eq!(private, plain, "n={n} k={k} t={t}");
                }
            }
        }
    }
}
